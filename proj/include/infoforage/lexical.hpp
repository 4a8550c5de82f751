#pragma once

// Lexical measures on fixed-size token samples: plug-in unigram entropy,
// type-token ratio and a maximum-likelihood Zipf exponent.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "infoforage/errors.hpp"
#include "infoforage/text.hpp"

namespace infoforage {

struct LexicalMeasures {
  double word_entropy_bits = 0.0;
  double type_token_ratio = 0.0;
  double zipf_exponent = 0.0;
  double zipf_loglik = 0.0;
  std::size_t n_tokens = 0;
  std::size_t n_types = 0;
};

/// Type counts in order of first occurrence.
[[nodiscard]] inline std::vector<std::size_t> type_counts(std::span<const std::string> tokens) {
  std::unordered_map<std::string_view, std::size_t> slot;
  slot.reserve(tokens.size());
  std::vector<std::size_t> counts;
  for (const auto& tok : tokens) {
    auto [it, fresh] = slot.try_emplace(tok, counts.size());
    if (fresh) counts.push_back(0);
    ++counts[it->second];
  }
  return counts;
}

/// Plug-in Shannon entropy of the unigram distribution, in bits.
[[nodiscard]] inline double word_entropy(std::span<const std::string> tokens) {
  if (tokens.empty()) throw EmptySampleError("word_entropy: empty sample");
  auto counts = type_counts(tokens);
  // Summing over sorted counts makes the result independent of token order bit for bit.
  std::sort(counts.begin(), counts.end());
  const double n = static_cast<double>(tokens.size());
  double h = 0.0;
  for (auto c : counts) {
    const double f = static_cast<double>(c) / n;
    h -= f * std::log2(f);
  }
  return h;
}

[[nodiscard]] inline double word_entropy(const TextSample& s) { return word_entropy(s.tokens); }

[[nodiscard]] inline double type_token_ratio(std::span<const std::string> tokens) {
  if (tokens.empty()) throw EmptySampleError("type_token_ratio: empty sample");
  return static_cast<double>(type_counts(tokens).size()) / static_cast<double>(tokens.size());
}

[[nodiscard]] inline double type_token_ratio(const TextSample& s) { return type_token_ratio(s.tokens); }

/// Riemann zeta for s > 1: direct sum of the first terms plus the
/// Euler-Maclaurin tail (integral, half term and Bernoulli corrections).
/// Relative error is below 1e-13 across s in (1, 50].
[[nodiscard]] inline double riemann_zeta(double s) {
  if (!(s > 1.0)) throw InputError("riemann_zeta: s must exceed 1");
  constexpr int kTerms = 20;
  // B_2k / (2k)!
  constexpr std::array<double, 6> kBernoulliOverFactorial = {
      1.0 / 6.0 / 2.0,
      -1.0 / 30.0 / 24.0,
      1.0 / 42.0 / 720.0,
      -1.0 / 30.0 / 40320.0,
      5.0 / 66.0 / 3628800.0,
      -691.0 / 2730.0 / 479001600.0,
  };
  double sum = 0.0;
  for (int k = kTerms - 1; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
  const double n = kTerms;
  double tail = std::pow(n, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(n, -s);
  // rising factorial s(s+1)...(s+2k-2) times n^(-s-2k+1)
  double rising = s;
  double power = std::pow(n, -s - 1.0);
  for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
    tail += kBernoulliOverFactorial[k] * rising * power;
    rising *= (s + 2.0 * k + 1.0) * (s + 2.0 * k + 2.0);
    power /= n * n;
  }
  return sum + tail;
}

struct PowerLawFit {
  double alpha = 0.0;
  double loglik = 0.0;
};

/// Log-likelihood of n observations with sum of logs `sum_log` under the
/// discrete power law P(x) = x^-alpha / zeta(alpha), x >= 1.
[[nodiscard]] inline double power_law_loglik(double alpha, double n, double sum_log) {
  return -alpha * sum_log - n * std::log(riemann_zeta(alpha));
}

struct PowerLawFitOptions {
  double alpha_min = 1.0001;
  double alpha_max = 20.0;
  double tolerance = 1e-6;
};

/// Golden-section maximisation of power_law_loglik. The likelihood is concave
/// in alpha (log zeta is convex), so the bracket maximum is global.
[[nodiscard]] inline PowerLawFit fit_discrete_power_law(double n, double sum_log,
                                                        const PowerLawFitOptions& opts = {}) {
  if (!(n > 0.0)) throw InputError("fit_discrete_power_law: no observations");
  if (!(sum_log >= 0.0)) throw InputError("fit_discrete_power_law: observations must be >= 1");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = opts.alpha_min;
  double hi = opts.alpha_max;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = power_law_loglik(a, n, sum_log);
  double fb = power_law_loglik(b, n, sum_log);
  while (hi - lo > opts.tolerance) {
    if (fa >= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = power_law_loglik(a, n, sum_log);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = power_law_loglik(b, n, sum_log);
    }
  }
  const double alpha = 0.5 * (lo + hi);
  return {alpha, power_law_loglik(alpha, n, sum_log)};
}

/// Frequency ranks (1 = most frequent, ties by first occurrence) paired with
/// the count of each type, in rank order.
[[nodiscard]] inline std::vector<std::size_t> rank_frequency(std::span<const std::string> tokens) {
  auto counts = type_counts(tokens);
  std::stable_sort(counts.begin(), counts.end(), std::greater<>{});
  return counts;
}

/// Zipf exponent by maximum likelihood: each token contributes one observation
/// equal to its type's frequency rank, fitted as a discrete power law with x_min = 1.
[[nodiscard]] inline PowerLawFit zipf_exponent(std::span<const std::string> tokens) {
  const auto counts = rank_frequency(tokens);
  if (counts.size() < 2)
    throw DegenerateInputError("zipf_exponent: needs at least two word types");
  double sum_log = 0.0;
  for (std::size_t r = 0; r < counts.size(); ++r)
    sum_log += static_cast<double>(counts[r]) * std::log(static_cast<double>(r + 1));
  return fit_discrete_power_law(static_cast<double>(tokens.size()), sum_log);
}

[[nodiscard]] inline PowerLawFit zipf_exponent(const TextSample& s) { return zipf_exponent(s.tokens); }

[[nodiscard]] inline LexicalMeasures compute_measures(std::span<const std::string> tokens) {
  LexicalMeasures m;
  m.n_tokens = tokens.size();
  m.n_types = type_counts(tokens).size();
  m.word_entropy_bits = word_entropy(tokens);
  m.type_token_ratio = type_token_ratio(tokens);
  const auto fit = zipf_exponent(tokens);
  m.zipf_exponent = fit.alpha;
  m.zipf_loglik = fit.loglik;
  return m;
}

}  // namespace infoforage
