#include <gtest/gtest.h>

#include <algorithm>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "infoforage/lexical.hpp"
#include "support/oracles.hpp"

using namespace infoforage;
using Tokens = std::vector<std::string>;

namespace {
Tokens distinct(std::size_t n) {
  Tokens t;
  for (std::size_t i = 0; i < n; ++i) t.push_back("w" + std::to_string(i));
  return t;
}

Tokens zipf_tokens(std::mt19937_64& rng, std::size_t n, double s = 1.1, std::size_t vocab = 800) {
  std::vector<double> w(vocab);
  for (std::size_t k = 0; k < vocab; ++k) w[k] = std::pow(k + 1.0, -s);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  Tokens t;
  for (std::size_t i = 0; i < n; ++i) t.push_back(oracle::pseudo_word(pick(rng)));
  return t;
}
}  // namespace

TEST(Entropy, TrivialCases) {
  EXPECT_EQ(word_entropy(Tokens{"a", "a", "a"}), 0.0);
  for (std::size_t n : {1u, 2u, 7u, 1024u, 2000u}) EXPECT_NEAR(word_entropy(distinct(n)), std::log2(double(n)), 1e-12);
  EXPECT_NEAR(word_entropy(Tokens{"a", "a", "b"}), -(2.0 / 3 * std::log2(2.0 / 3) + 1.0 / 3 * std::log2(1.0 / 3)),
              1e-15);
  EXPECT_THROW((void)word_entropy(Tokens{}), InputError);
}

TEST(Ttr, TrivialCases) {
  EXPECT_DOUBLE_EQ(type_token_ratio(Tokens{"a", "a", "a"}), 1.0 / 3);
  EXPECT_EQ(type_token_ratio(distinct(50)), 1.0);
  EXPECT_DOUBLE_EQ(type_token_ratio(Tokens{"a", "a", "b"}), 2.0 / 3);
  EXPECT_THROW((void)type_token_ratio(Tokens{}), InputError);
}

TEST(Entropy, BoundedByLogTypesWithEqualityIffUniform) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = zipf_tokens(rng, 500);
    const auto m = compute_measures(t);
    EXPECT_LT(m.word_entropy_bits, std::log2(double(std::min(m.n_tokens, m.n_types))));
  }
  Tokens uniform;
  for (int rep = 0; rep < 4; ++rep)
    for (const auto& w : distinct(25)) uniform.push_back(w);
  EXPECT_NEAR(word_entropy(uniform), std::log2(25.0), 1e-12);
}

TEST(Measures, PermutationInvariant) {
  std::mt19937_64 rng(10);
  auto t = zipf_tokens(rng, 2000);
  const auto base = compute_measures(t);
  for (int k = 0; k < 100; ++k) {
    std::shuffle(t.begin(), t.end(), rng);
    const auto m = compute_measures(t);
    EXPECT_EQ(m.word_entropy_bits, base.word_entropy_bits);
    EXPECT_EQ(m.type_token_ratio, base.type_token_ratio);
    // Ties in frequency may be ranked differently, which permutes equal counts
    // only: the rank-log sum and so the fit are unchanged.
    EXPECT_EQ(m.zipf_exponent, base.zipf_exponent);
  }
}

TEST(Measures, DuplicatingTokensKeepsEntropyHalvesTtr) {
  std::mt19937_64 rng(12);
  const auto t = zipf_tokens(rng, 700);
  Tokens doubled;
  for (const auto& w : t) {
    doubled.push_back(w);
    doubled.push_back(w);
  }
  EXPECT_NEAR(word_entropy(doubled), word_entropy(t), 1e-12);
  EXPECT_DOUBLE_EQ(type_token_ratio(doubled), type_token_ratio(t) / 2);
}

TEST(Zeta, MatchesBoost) {
  for (double s : {1.0001, 1.001, 1.01, 1.1, 1.5, 2.0, 2.5, 3.0, 5.0, 10.0, 20.0})
    EXPECT_NEAR(riemann_zeta(s), boost::math::zeta(s), 1e-12 * boost::math::zeta(s)) << s;
}

TEST(Zeta, KnownValues) {
  EXPECT_NEAR(riemann_zeta(2.0), std::numbers::pi * std::numbers::pi / 6, 1e-14);
  EXPECT_NEAR(riemann_zeta(4.0), std::pow(std::numbers::pi, 4) / 90, 1e-14);
}

TEST(Zipf, RankFrequencyOrdering) {
  const Tokens t = {"b", "a", "a", "c", "b", "a"};
  EXPECT_EQ(rank_frequency(t), (std::vector<std::size_t>{3, 2, 1}));
}

TEST(Zipf, SingleTypeThrows) {
  EXPECT_THROW((void)zipf_exponent(Tokens{"a", "a"}), DegenerateInputError);
}

TEST(Zipf, TwoEqualTypesMatchesGridSearch) {
  for (std::size_t c : {1u, 5u, 100u}) {
    Tokens t;
    for (std::size_t i = 0; i < c; ++i) {
      t.push_back("x");
      t.push_back("y");
    }
    const auto fit = zipf_exponent(t);
    const double n = 2.0 * c, sum_log = c * std::log(2.0);
    double best_alpha = 0, best = -INFINITY;
    for (double a = 1.0001; a <= 20.0; a += 1e-4) {
      const double ll = -a * sum_log - n * std::log(boost::math::zeta(a));
      if (ll > best) {
        best = ll;
        best_alpha = a;
      }
    }
    EXPECT_NEAR(fit.alpha, best_alpha, 2e-4);
    EXPECT_GE(fit.loglik, best - 1e-9);
  }
}

TEST(Zipf, ReturnsLocalMaximum) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = zipf_tokens(rng, 2000, 0.8 + 0.1 * trial);
    const auto fit = zipf_exponent(t);
    const auto counts = rank_frequency(t);
    double sum_log = 0;
    for (std::size_t r = 0; r < counts.size(); ++r) sum_log += counts[r] * std::log(r + 1.0);
    const double n = static_cast<double>(t.size());
    EXPECT_NEAR(fit.loglik, power_law_loglik(fit.alpha, n, sum_log), 1e-9 * std::abs(fit.loglik));
    if (fit.alpha - 0.01 >= 1.0001) {
      EXPECT_GE(fit.loglik, power_law_loglik(fit.alpha - 0.01, n, sum_log));
    }
    EXPECT_GE(fit.loglik, power_law_loglik(fit.alpha + 0.01, n, sum_log));
  }
}

TEST(Zipf, RecoversGeneratingExponent) {
  for (double alpha : {1.1, 1.5, 2.0}) {
    std::vector<double> err;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      std::mt19937_64 rng(seed * 7919 + 1);
      double sum_log = 0;
      for (int i = 0; i < 2000; ++i) sum_log += oracle::zipf_log_draw(rng, alpha);
      err.push_back(std::abs(fit_discrete_power_law(2000, sum_log).alpha - alpha));
    }
    std::nth_element(err.begin(), err.begin() + err.size() / 2, err.end());
    EXPECT_LE(err[err.size() / 2], 0.1) << alpha;
  }
}

TEST(Zipf, FitRejectsBadSufficientStatistics) {
  EXPECT_THROW((void)fit_discrete_power_law(0, 0), InputError);
  EXPECT_THROW((void)fit_discrete_power_law(10, -1), InputError);
}

TEST(Measures, ComputeMeasuresConsistent) {
  std::mt19937_64 rng(3);
  const auto t = zipf_tokens(rng, 2000);
  const auto m = compute_measures(t);
  EXPECT_EQ(m.n_tokens, 2000u);
  EXPECT_EQ(m.n_types, type_counts(t).size());
  EXPECT_DOUBLE_EQ(m.type_token_ratio, double(m.n_types) / 2000);
  EXPECT_EQ(m.word_entropy_bits, word_entropy(t));
  EXPECT_EQ(m.zipf_exponent, zipf_exponent(t).alpha);
}
