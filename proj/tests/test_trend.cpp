#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "infoforage/trend.hpp"

using namespace infoforage;
using Vec = std::vector<double>;

namespace {

std::vector<YearValue> flat(const Vec& values, int year) {
  std::vector<YearValue> out;
  for (double v : values) out.push_back({year, v});
  return out;
}

Vec normal_series(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  Vec x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

// Step-by-step KPSS in long double, written independently of the library.
long double hand_kpss(const Vec& x) {
  const long double n = x.size();
  long double mean = 0;
  for (double v : x) mean += v;
  mean /= n;
  const int lags = static_cast<int>(12.0 * std::pow(n / 100.0L, 0.25L));
  long double s2 = 0;
  for (int lag = 0; lag <= lags; ++lag) {
    long double acov = 0;
    for (std::size_t t = lag; t < x.size(); ++t) acov += static_cast<long double>(x[t] - mean) * (x[t - lag] - mean);
    const long double w = lag == 0 ? 1.0L : 2.0L * (1.0L - lag / (lags + 1.0L));
    s2 += w * acov;
  }
  s2 /= n;
  long double cum = 0, eta = 0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    cum += static_cast<long double>(x[t]) - mean;
    eta += cum * cum;
  }
  return eta / (n * n * s2);
}

}  // namespace

TEST(MovingAverage, ConstantSeries) {
  std::vector<YearValue> pts;
  for (int y = 1900; y < 1930; ++y)
    for (int k = 0; k < 3; ++k) pts.push_back({y, 4.25});
  const auto out = moving_average_ci(pts);
  ASSERT_FALSE(out.empty());
  for (const auto& p : out) {
    EXPECT_EQ(p.mean, 4.25);
    EXPECT_EQ(p.std_error, 0.0);
  }
}

TEST(MovingAverage, OmitsSparseWindows) {
  const auto out = moving_average_ci(flat(Vec(9, 1.0), 2000));
  EXPECT_TRUE(out.empty());
  // Only the observed year range is reported.
  const auto ten = moving_average_ci(flat(Vec(10, 1.0), 2000));
  ASSERT_EQ(ten.size(), 1u);
  EXPECT_EQ(ten[0].year, 2000);
}

TEST(MovingAverage, AlternatingHandComputation) {
  Vec v;
  for (int i = 0; i < 11; ++i) v.push_back(i % 2);
  const auto out = moving_average_ci(flat(v, 1950));
  ASSERT_EQ(out.size(), 1u);
  const double mean = 5.0 / 11.0;
  const double var = (6 * mean * mean + 5 * (1 - mean) * (1 - mean)) / 10.0;
  EXPECT_NEAR(out[0].mean, mean, 1e-15);
  EXPECT_NEAR(out[0].std_error, std::sqrt(var / 11.0), 1e-15);
  EXPECT_NEAR(out[0].ci_half_width(), 1.96 * std::sqrt(var / 11.0), 1e-15);
  EXPECT_EQ(out[0].n, 11u);
}

TEST(MovingAverage, WindowSpansElevenYears) {
  std::vector<YearValue> pts;
  for (int y = 1900; y <= 1920; ++y) pts.push_back({y, double(y)});
  const auto out = moving_average_ci(pts, 5, 11);
  ASSERT_EQ(out.size(), 11u);  // 1905..1915 have full windows
  EXPECT_EQ(out.front().year, 1905);
  EXPECT_DOUBLE_EQ(out.front().mean, 1905.0);
}

TEST(Combine, SingleCategoryIdentity) {
  const std::vector<std::vector<TimeseriesPoint>> one = {{{1900, 1.5, 0.2, 12}, {1901, 2.5, 0.3, 15}}};
  const auto out = combine_categories(one);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].mean, 1.5);
  EXPECT_EQ(out[0].std_error, 0.2);
  EXPECT_EQ(out[1].mean, 2.5);
  EXPECT_EQ(out[1].std_error, 0.3);
}

TEST(Combine, DeltaMethod) {
  const std::vector<std::vector<TimeseriesPoint>> two = {{{1900, 1.0, 3.0, 10}, {1901, 7.0, 1.0, 10}},
                                                         {{1900, 3.0, 4.0, 10}}};
  const auto out = combine_categories(two);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_DOUBLE_EQ(out[0].mean, 2.0);
  EXPECT_DOUBLE_EQ(out[0].std_error, 2.5);
  EXPECT_EQ(out[0].n, 2u);
  EXPECT_EQ(out[1].n, 1u);
  EXPECT_EQ(out[1].mean, 7.0);
  EXPECT_EQ(out[1].std_error, 1.0);
}

TEST(Aggregate, MedianAndMean) {
  const std::vector<YearValue> pts = {{1901, 5}, {1900, 1}, {1900, 2}, {1900, 10}, {1901, 7}};
  const auto med = annual_aggregate(pts, Aggregate::median);
  ASSERT_EQ(med.size(), 2u);
  EXPECT_EQ(med[0].year, 1900);
  EXPECT_EQ(med[0].value, 2.0);
  EXPECT_EQ(med[1].value, 6.0);
  EXPECT_NEAR(annual_aggregate(pts, Aggregate::mean)[0].value, 13.0 / 3, 1e-15);
}

TEST(Quantile, Type7) {
  const Vec v = {7, 1, 3, 5};
  EXPECT_DOUBLE_EQ(quantile(v, 0.25), 2.5);
  EXPECT_DOUBLE_EQ(quantile(v, 0.5), 4.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.75), 5.5);
  EXPECT_EQ(quantile(v, 0.0), 1.0);
  EXPECT_EQ(quantile(v, 1.0), 7.0);
}

TEST(MannKendall, IncreasingSeries) {
  Vec x(20);
  std::iota(x.begin(), x.end(), 1.0);
  const auto r = mann_kendall(x);
  EXPECT_EQ(r.statistic, 190.0);
  EXPECT_LT(r.p_value, 0.001);
  EXPECT_TRUE(r.reject_at_5pct);
}

TEST(MannKendall, ConstantSeries) {
  const auto r = mann_kendall(Vec(12, 3.0));
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_FALSE(r.reject_at_5pct);
}

TEST(MannKendall, SmallHandExample) {
  // Pairs: (1,3)+ (1,2)+ (1,4)+ (3,2)- (3,4)+ (2,4)+ -> S = 4
  const auto r = mann_kendall(Vec{1, 3, 2, 4});
  EXPECT_EQ(r.statistic, 4.0);
  const double var = 4.0 * 3 * 13 / 18;
  EXPECT_NEAR(r.detail.at("var_s"), var, 1e-12);
  EXPECT_NEAR(r.detail.at("z"), 3.0 / std::sqrt(var), 1e-12);
  EXPECT_NEAR(r.p_value, std::erfc(3.0 / std::sqrt(var) / std::sqrt(2.0)), 1e-12);
}

TEST(MannKendall, TieCorrection) {
  const Vec x = {1, 2, 2, 3, 3, 3, 4};
  const auto r = mann_kendall(x);
  const double n = 7;
  const double ties = 2 * 1 * 9 + 3 * 2 * 11;
  EXPECT_NEAR(r.detail.at("var_s"), (n * (n - 1) * (2 * n + 5) - ties) / 18, 1e-12);
}

TEST(MannKendall, NegationAndSorting) {
  const auto x = normal_series(5, 40);
  Vec neg = x;
  for (auto& v : neg) v = -v;
  const auto a = mann_kendall(x), b = mann_kendall(neg);
  EXPECT_EQ(a.statistic, -b.statistic);
  EXPECT_NEAR(a.p_value, b.p_value, 1e-15);
  Vec sorted = x;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_GE(std::abs(mann_kendall(sorted).statistic), std::abs(a.statistic));
  EXPECT_EQ(mann_kendall(sorted).statistic, 40.0 * 39 / 2);
}

TEST(MannKendall, TooShort) { EXPECT_THROW((void)mann_kendall(Vec{1, 2, 3}), InputError); }

TEST(MannKendall, Calibration) {
  int rejections = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) rejections += mann_kendall(normal_series(seed, 110)).reject_at_5pct;
  EXPECT_GE(rejections, 20);
  EXPECT_LE(rejections, 80);
}

TEST(Kpss, LagRule) {
  EXPECT_EQ(kpss_lags(100), 12u);
  EXPECT_EQ(kpss_lags(110), 12u);
  EXPECT_EQ(kpss_lags(12), 7u);
  EXPECT_EQ(kpss_lags(200), 14u);
}

TEST(Kpss, RampRejects) {
  Vec ramp(110);
  std::iota(ramp.begin(), ramp.end(), 1.0);
  const auto r = kpss_level(ramp);
  EXPECT_GT(r.statistic, 0.739);
  EXPECT_EQ(r.p_value, 0.01);
  EXPECT_TRUE(r.reject_at_5pct);
}

TEST(Kpss, NoiseMostlyAtCeiling) {
  // Under the null the statistic falls below the 10% critical value about 90% of the time.
  int at_ceiling = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) at_ceiling += kpss_level(normal_series(seed + 1000, 200)).p_value == 0.1;
  EXPECT_GE(at_ceiling, 1740);
  EXPECT_LE(at_ceiling, 1860);
}

TEST(Kpss, HandComputation) {
  const Vec x = {0.3, -1.2, 2.5, 0.7, 0.1, -0.4, 1.9, 3.3, -2.2, 0.8, 1.1, 0.05};
  EXPECT_NEAR(kpss_level(x).statistic, static_cast<double>(hand_kpss(x)), 1e-10);
}

TEST(Kpss, InterpolatedPValue) {
  // A statistic between table entries gets a linearly interpolated p.
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    Vec x = normal_series(seed, 60);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += 0.02 * i;
    const auto r = kpss_level(x);
    if (r.statistic > 0.347 && r.statistic < 0.463) {
      EXPECT_NEAR(r.p_value, 0.10 + (r.statistic - 0.347) / (0.463 - 0.347) * (0.05 - 0.10), 1e-12);
      return;
    }
  }
  GTEST_SKIP() << "no statistic landed between the first two table entries";
}

TEST(Kpss, ShiftInvariantAndErrors) {
  const auto x = normal_series(77, 50);
  Vec shifted = x;
  for (auto& v : shifted) v += 1000.0;
  EXPECT_NEAR(kpss_level(x).statistic, kpss_level(shifted).statistic, 1e-9);
  EXPECT_THROW((void)kpss_level(Vec(12, 1.0)), DegenerateInputError);
  EXPECT_THROW((void)kpss_level(Vec(9, 1.0)), InputError);
}

TEST(Pearson, PerfectLines) {
  const Vec x = {1, 2, 3, 4, 5};
  Vec y, z;
  for (double v : x) {
    y.push_back(2 * v + 1);
    z.push_back(-v);
  }
  EXPECT_DOUBLE_EQ(pearson(x, y).statistic, 1.0);
  EXPECT_DOUBLE_EQ(pearson(x, z).statistic, -1.0);
  EXPECT_EQ(pearson(x, y).p_value, 0.0);
}

TEST(Pearson, DirectFormula) {
  const Vec x = {1, 2, 3, 4}, y = {1, 3, 2, 5};
  // means 2.5, 2.75; sxy = 5.5, sxx = 5, syy = 8.75
  const double r = 5.5 / std::sqrt(5 * 8.75);
  const auto res = pearson(x, y);
  EXPECT_NEAR(res.statistic, r, 1e-15);
  // Two dof: the t distribution has closed form p = 1 - |t| / sqrt(2 + t^2).
  const double t = r * std::sqrt(2 / (1 - r * r));
  EXPECT_NEAR(res.p_value, 1 - std::abs(t) / std::sqrt(2 + t * t), 1e-12);
}

TEST(Pearson, AffineInvariance) {
  const auto x = normal_series(1, 30), y = normal_series(2, 30);
  Vec x2 = x, y2 = y;
  for (auto& v : x2) v = 3 * v - 7;
  for (auto& v : y2) v = 0.5 * v + 100;
  EXPECT_NEAR(pearson(x, y).statistic, pearson(x2, y2).statistic, 1e-12);
}

TEST(Pearson, Errors) {
  EXPECT_THROW((void)pearson(Vec{1, 2, 3}, Vec{1, 1, 1}), InputError);
  EXPECT_THROW((void)pearson(Vec{1, 2}, Vec{1, 2}), InputError);
  EXPECT_THROW((void)pearson(Vec{1, 2, 3}, Vec{1, 2}), InputError);
}

TEST(Anova, IdenticalGroups) {
  const std::vector<Vec> g = {{1, 2, 3, 4}, {1, 2, 3, 4}, {4, 3, 2, 1}};
  const auto r = anova_oneway(g);
  EXPECT_NEAR(r.statistic, 0.0, 1e-12);
  EXPECT_NEAR(r.p_value, 1.0, 1e-9);
}

TEST(Anova, SeparatedGroups) {
  auto a = normal_series(1, 20), b = normal_series(2, 20);
  for (auto& v : b) v += 10;
  const std::vector<Vec> g = {a, b};
  EXPECT_LT(anova_oneway(g).p_value, 0.001);
}

TEST(Anova, HandComputation) {
  const std::vector<Vec> g = {{2, 4, 6}, {5, 7}, {1, 1, 2, 4}};
  // Group means 4, 6, 2; grand mean 32/9.
  const double grand = 32.0 / 9;
  const double ssb = 3 * (4 - grand) * (4 - grand) + 2 * (6 - grand) * (6 - grand) + 4 * (2 - grand) * (2 - grand);
  const double ssw = 8 + 2 + 6;
  const auto r = anova_oneway(g);
  EXPECT_NEAR(r.statistic, (ssb / 2) / (ssw / 6), 1e-12);
  EXPECT_EQ(r.detail.at("df_between"), 2.0);
  EXPECT_EQ(r.detail.at("df_within"), 6.0);
}

TEST(Anova, AffineInvarianceAndErrors) {
  const std::vector<Vec> g = {normal_series(3, 8), normal_series(4, 9), normal_series(5, 7)};
  std::vector<Vec> h = g;
  for (auto& grp : h)
    for (auto& v : grp) v = -4 * v + 2;
  EXPECT_NEAR(anova_oneway(g).statistic, anova_oneway(h).statistic, 1e-10);
  EXPECT_THROW((void)anova_oneway(std::vector<Vec>{{1, 2}}), InputError);
  EXPECT_THROW((void)anova_oneway(std::vector<Vec>{{1, 2}, {3}}), InputError);
  EXPECT_THROW((void)anova_oneway(std::vector<Vec>{{1, 1}, {3, 3}}), DegenerateInputError);
}

TEST(Kde, MassSymmetryAndTwoPoints) {
  const auto x = normal_series(8, 500);
  const auto curve = kde_scott(x);
  ASSERT_EQ(curve.size(), 256u);
  double mass = 0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    mass += 0.5 * (curve[i].density + curve[i - 1].density) * (curve[i].x - curve[i - 1].x);
  EXPECT_LE(mass, 1.0);
  EXPECT_GE(mass, 0.6);

  const Vec sym = {-3, -1, -0.5, 0, 0.5, 1, 3};
  const auto s = kde_scott(sym);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i].density, s[s.size() - 1 - i].density, 1e-9);

  const auto two = kde_scott(Vec{0, 1});
  EXPECT_EQ(two.front().x, 0.0);
  EXPECT_EQ(two.back().x, 1.0);
  EXPECT_NEAR(two.front().density, two.back().density, 1e-15);
  const double h = std::sqrt(0.5) * std::pow(2.0, -0.2);
  const double direct = (1 + std::exp(-0.5 / (h * h))) / (2 * h * std::sqrt(2 * std::numbers::pi));
  EXPECT_NEAR(two.front().density, direct, 1e-14);
  EXPECT_THROW((void)kde_scott(Vec{2, 2, 2}), InputError);
}
