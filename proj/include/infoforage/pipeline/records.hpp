#pragma once

// Manifest rows in, measure records out. Records persist as JSONL (default)
// or CSV with identical field names.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "infoforage/errors.hpp"
#include "infoforage/pipeline/csv.hpp"
#include "infoforage/pipeline/digest.hpp"
#include "infoforage/text.hpp"

namespace infoforage::pipeline {

using ordered_json = nlohmann::ordered_json;

inline constexpr std::string_view kManifestHeader = "path,year,category,profile,source_id";

struct ManifestRow {
  std::string path;
  std::optional<int> year;
  Category category = Category::other;
  CleaningProfile profile = CleaningProfile::plain;
  std::string source_id;
};

/// Relative paths resolve against the manifest's directory.
[[nodiscard]] inline std::vector<ManifestRow> read_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw InputError("cannot open manifest " + manifest_path);
  const auto base = std::filesystem::path(manifest_path).parent_path();

  std::string line;
  if (!std::getline(in, line)) throw InputError("manifest is empty: " + manifest_path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
  if (line != kManifestHeader)
    throw InputError("manifest header must be exactly '" + std::string(kManifestHeader) + "', got '" +
                     line + "'");

  std::vector<ManifestRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = parse_csv_line(line);
    const std::string where = manifest_path + ":" + std::to_string(line_no) + ": ";
    if (f.size() != 5) throw InputError(where + "expected 5 fields, got " + std::to_string(f.size()));
    ManifestRow row;
    try {
      std::filesystem::path p(f[0]);
      row.path = p.is_absolute() || base.empty() ? p.string() : (base / p).string();
      if (!f[1].empty()) row.year = static_cast<int>(parse_integer(f[1], "year"));
      row.category = parse_category(f[2]);
      row.profile = parse_profile(f[3]);
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
    row.source_id = f[4];
    if (row.source_id.empty()) row.source_id = f[0];
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Every parameter that changes measure values. Two record sets with
/// different hashes must not be analysed together.
struct MeasureConfig {
  std::size_t sample_size = 2000;

  [[nodiscard]] std::string canonical() const {
    std::ostringstream s;
    s << "sample_size=" << sample_size << ";tokenizer=wordrun-lower-v1;entropy=plugin-log2"
      << ";zipf=rank-mle-xmin1;zipf_bracket=1.0001,20;zipf_tol=1e-6;truncate=last";
    return s.str();
  }
  [[nodiscard]] std::string hash() const { return short_digest(canonical()); }
};

struct MeasureRecord {
  std::string source_id;
  std::optional<int> year;
  Category category = Category::other;
  std::size_t n_tokens = 0;
  double word_entropy_bits = 0.0;
  double type_token_ratio = 0.0;
  double zipf_exponent = 0.0;
  double zipf_loglik = 0.0;
  std::string tool_version;
  std::string config_hash;

  bool operator==(const MeasureRecord&) const = default;
};

inline const std::vector<std::string>& record_fields() {
  static const std::vector<std::string> fields = {
      "source_id",        "year",          "category",    "n_tokens",     "word_entropy_bits",
      "type_token_ratio", "zipf_exponent", "zipf_loglik", "tool_version", "config_hash"};
  return fields;
}

[[nodiscard]] inline ordered_json to_json(const MeasureRecord& r) {
  ordered_json j;
  j["source_id"] = r.source_id;
  j["year"] = r.year ? ordered_json(*r.year) : ordered_json(nullptr);
  j["category"] = std::string(to_string(r.category));
  j["n_tokens"] = r.n_tokens;
  j["word_entropy_bits"] = r.word_entropy_bits;
  j["type_token_ratio"] = r.type_token_ratio;
  j["zipf_exponent"] = r.zipf_exponent;
  j["zipf_loglik"] = r.zipf_loglik;
  j["tool_version"] = r.tool_version;
  j["config_hash"] = r.config_hash;
  return j;
}

[[nodiscard]] inline MeasureRecord record_from_json(const ordered_json& j) {
  MeasureRecord r;
  try {
    r.source_id = j.at("source_id").get<std::string>();
    if (!j.at("year").is_null()) r.year = j.at("year").get<int>();
    r.category = parse_category(j.at("category").get<std::string>());
    r.n_tokens = j.at("n_tokens").get<std::size_t>();
    r.word_entropy_bits = j.at("word_entropy_bits").get<double>();
    r.type_token_ratio = j.at("type_token_ratio").get<double>();
    r.zipf_exponent = j.at("zipf_exponent").get<double>();
    r.zipf_loglik = j.at("zipf_loglik").get<double>();
    r.tool_version = j.at("tool_version").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed measure record: ") + e.what());
  }
  return r;
}

[[nodiscard]] inline CsvRow to_csv_row(const MeasureRecord& r) {
  return {r.source_id,
          r.year ? std::to_string(*r.year) : std::string(),
          std::string(to_string(r.category)),
          std::to_string(r.n_tokens),
          format_number(r.word_entropy_bits),
          format_number(r.type_token_ratio),
          format_number(r.zipf_exponent),
          format_number(r.zipf_loglik),
          r.tool_version,
          r.config_hash};
}

enum class RecordFormat { jsonl, csv };

[[nodiscard]] inline std::string serialize_records(const std::vector<MeasureRecord>& records,
                                                   RecordFormat format) {
  std::string out;
  if (format == RecordFormat::jsonl) {
    for (const auto& r : records) {
      out += to_json(r).dump();
      out.push_back('\n');
    }
  } else {
    out += join_csv(record_fields()) + "\n";
    for (const auto& r : records) out += join_csv(to_csv_row(r)) + "\n";
  }
  return out;
}

inline void write_records(const std::string& path, const std::vector<MeasureRecord>& records,
                          RecordFormat format) {
  write_file(path, serialize_records(records, format));
}

/// Reads JSONL or CSV (detected from content: CSV starts with the header row).
[[nodiscard]] inline std::vector<MeasureRecord> read_records(const std::string& path) {
  const std::string content = read_file(path);
  std::vector<MeasureRecord> out;
  std::size_t first = content.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return out;

  if (content[first] == '{') {
    std::istringstream in(content);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        out.push_back(record_from_json(ordered_json::parse(line)));
      } catch (const nlohmann::json::exception& e) {
        throw InputError(path + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    return out;
  }

  const CsvTable table = read_csv(path);
  if (table.header != record_fields()) throw InputError(path + ": unexpected measure CSV header");
  for (const auto& f : table.rows) {
    if (f.size() != record_fields().size()) throw InputError(path + ": wrong field count in measure CSV");
    MeasureRecord r;
    r.source_id = f[0];
    if (!f[1].empty()) r.year = static_cast<int>(parse_integer(f[1], "year"));
    r.category = parse_category(f[2]);
    r.n_tokens = static_cast<std::size_t>(parse_integer(f[3], "n_tokens"));
    r.word_entropy_bits = parse_number(f[4], "word_entropy_bits");
    r.type_token_ratio = parse_number(f[5], "type_token_ratio");
    r.zipf_exponent = parse_number(f[6], "zipf_exponent");
    r.zipf_loglik = parse_number(f[7], "zipf_loglik");
    r.tool_version = f[8];
    r.config_hash = f[9];
    out.push_back(std::move(r));
  }
  return out;
}

/// The single config hash shared by `records`; mixing hashes is an error.
[[nodiscard]] inline std::string common_config_hash(const std::vector<MeasureRecord>& records) {
  std::set<std::string> hashes;
  for (const auto& r : records) hashes.insert(r.config_hash);
  if (hashes.size() > 1) {
    std::string list;
    for (const auto& h : hashes) list += (list.empty() ? "" : ", ") + h;
    throw InputError("measure records come from different configurations (config_hash " + list +
                     "); refusing to mix them in one analysis");
  }
  return hashes.empty() ? std::string() : *hashes.begin();
}

}  // namespace infoforage::pipeline
