#pragma once

// Corpus cleaning and tokenization.
//
// Profiles:
//   plain      remove apostrophes, tokenize
//   coha_coca  strip a leading metadata header, remove XML-style tags, drop
//              sentences containing '@' (copyright masking), then as plain
//   social     drop URLs and any word containing '@' or '#', then as plain
//
// Tokens are maximal runs of word characters: ASCII letters and digits plus
// any non-ASCII UTF-8 byte that is not one of the recognised Unicode quotes,
// dashes or ellipsis. Punctuation is split off and, carrying no alphanumeric
// character, discarded. ASCII letters are lowercased. Absolute measure levels
// depend on these choices; trends across samples cleaned the same way do not.

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infoforage/errors.hpp"

namespace infoforage {

enum class Category { news, magazine, fiction, nonfiction, social, other };
enum class CleaningProfile { coha_coca, plain, social };

[[nodiscard]] inline std::string_view to_string(Category c) {
  switch (c) {
    case Category::news: return "news";
    case Category::magazine: return "magazine";
    case Category::fiction: return "fiction";
    case Category::nonfiction: return "nonfiction";
    case Category::social: return "social";
    case Category::other: return "other";
  }
  return "other";
}

[[nodiscard]] inline std::string_view to_string(CleaningProfile p) {
  switch (p) {
    case CleaningProfile::coha_coca: return "coha_coca";
    case CleaningProfile::plain: return "plain";
    case CleaningProfile::social: return "social";
  }
  return "plain";
}

namespace detail {
inline std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}
}  // namespace detail

/// Accepts the corpus spellings seen in the wild ("nf", "non-fiction", "mag", ...).
[[nodiscard]] inline Category parse_category(std::string_view text) {
  const std::string s = detail::lower_ascii(text);
  if (s == "news" || s == "newspaper" || s == "newspapers") return Category::news;
  if (s == "magazine" || s == "magazines" || s == "mag") return Category::magazine;
  if (s == "fiction" || s == "fic") return Category::fiction;
  if (s == "nonfiction" || s == "non-fiction" || s == "non_fiction" || s == "nf")
    return Category::nonfiction;
  if (s == "social") return Category::social;
  if (s == "other") return Category::other;
  throw InputError("unknown category '" + std::string(text) + "'");
}

[[nodiscard]] inline CleaningProfile parse_profile(std::string_view text) {
  const std::string s = detail::lower_ascii(text);
  if (s == "coha_coca") return CleaningProfile::coha_coca;
  if (s == "plain") return CleaningProfile::plain;
  if (s == "social") return CleaningProfile::social;
  throw InputError("unknown cleaning profile '" + std::string(text) + "'");
}

struct TextSample {
  std::vector<std::string> tokens;
  std::optional<int> year;
  Category category = Category::other;
  std::string source_id;
};

namespace detail {

inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

inline bool is_blank(std::string_view line) {
  for (char c : line)
    if (!is_space(c)) return false;
  return true;
}

inline bool looks_like_metadata(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && is_space(line[i])) ++i;
  line.remove_prefix(i);
  if (line.starts_with("##") || line.starts_with("@@")) return true;
  bool has_upper = false;
  for (char c : line) {
    const auto u = static_cast<unsigned char>(c);
    if (std::islower(u)) return false;
    if (std::isupper(u)) has_upper = true;
  }
  return has_upper;
}

// Drops everything up to the first blank line when the first non-blank line
// is a "##"/"@@" id line or all-caps metadata.
inline std::string strip_header(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t first = 0;
  while (first < lines.size() && is_blank(lines[first])) ++first;
  if (first == lines.size() || !looks_like_metadata(lines[first])) return std::string(text);
  std::size_t blank = first + 1;
  while (blank < lines.size() && !is_blank(lines[blank])) ++blank;
  if (blank >= lines.size()) return std::string(text);
  std::string out;
  for (std::size_t i = blank + 1; i < lines.size(); ++i) {
    out.append(lines[i]);
    if (i + 1 < lines.size()) out.push_back('\n');
  }
  return out;
}

inline std::string remove_tags(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '<') {
      const auto close = text.find('>', i + 1);
      if (close != std::string_view::npos) {
        out.push_back(' ');
        i = close;
        continue;
      }
    }
    out.push_back(text[i]);
  }
  return out;
}

// Sentences end at '.', '?' or '!' followed by whitespace (or end of text).
inline std::string drop_masked_sentences(std::string_view text) {
  std::string out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    const auto sentence = text.substr(start, end - start);
    if (sentence.find('@') == std::string_view::npos) {
      out.append(sentence);
      out.push_back(' ');
    }
    start = end;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if ((c == '.' || c == '?' || c == '!') && (i + 1 == text.size() || is_space(text[i + 1])))
      flush(i + 1);
  }
  if (start < text.size()) flush(text.size());
  return out;
}

inline std::vector<std::string_view> split_whitespace(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  return words;
}

inline bool is_url(std::string_view word) {
  return word.find("://") != std::string_view::npos || word.starts_with("www.") ||
         word.starts_with("WWW.");
}

inline std::string drop_social_markup(std::string_view text) {
  std::string out;
  for (auto word : split_whitespace(text)) {
    if (is_url(word) || word.find('@') != std::string_view::npos ||
        word.find('#') != std::string_view::npos)
      continue;
    out.append(word);
    out.push_back(' ');
  }
  return out;
}

// Removes ASCII and typographic apostrophes; maps typographic quotes, dashes,
// ellipsis and no-break space to a plain space.
inline std::string normalize_punctuation(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c == '\'') continue;
    if (c == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x80) {
      const auto c3 = static_cast<unsigned char>(text[i + 2]);
      if (c3 == 0x98 || c3 == 0x99) {  // left/right single quotation mark
        i += 2;
        continue;
      }
      if (c3 == 0x93 || c3 == 0x94 || c3 == 0x9C || c3 == 0x9D || c3 == 0xA6) {
        out.push_back(' ');
        i += 2;
        continue;
      }
    }
    if (c == 0xC2 && i + 1 < text.size()) {
      const auto c2 = static_cast<unsigned char>(text[i + 1]);
      if (c2 == 0xA0 || c2 == 0xAB || c2 == 0xBB) {
        out.push_back(' ');
        ++i;
        continue;
      }
    }
    out.push_back(text[i]);
  }
  return out;
}

inline bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u);
}

}  // namespace detail

/// Split cleaned text into lowercase word tokens.
[[nodiscard]] inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !detail::is_word_byte(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && detail::is_word_byte(text[i])) ++i;
    if (i > start) tokens.push_back(detail::lower_ascii(text.substr(start, i - start)));
  }
  return tokens;
}

[[nodiscard]] inline TextSample clean_and_tokenize(std::string_view raw, CleaningProfile profile) {
  std::string text(raw);
  switch (profile) {
    case CleaningProfile::coha_coca:
      text = detail::strip_header(text);
      text = detail::remove_tags(text);
      text = detail::drop_masked_sentences(text);
      break;
    case CleaningProfile::social:
      text = detail::drop_social_markup(text);
      break;
    case CleaningProfile::plain:
      break;
  }
  text = detail::normalize_punctuation(text);

  TextSample sample;
  sample.tokens = tokenize(text);
  if (sample.tokens.empty()) throw EmptySampleError("no tokens left after cleaning");
  return sample;
}

/// The last n tokens, or nullopt when the sample is shorter than n and must be
/// excluded.
[[nodiscard]] inline std::optional<TextSample> truncate_last(const TextSample& sample,
                                                             std::size_t n = 2000) {
  if (sample.tokens.size() < n) return std::nullopt;
  TextSample out;
  out.year = sample.year;
  out.category = sample.category;
  out.source_id = sample.source_id;
  out.tokens.assign(sample.tokens.end() - static_cast<std::ptrdiff_t>(n), sample.tokens.end());
  return out;
}

}  // namespace infoforage
