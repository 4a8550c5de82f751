#pragma once

// Timeseries smoothing and the trend/difference tests applied to lexical
// measures: moving average with CI, delta-method category combination,
// Mann-Kendall, KPSS (level), Pearson, one-way ANOVA, Scott-rule KDE.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "infoforage/errors.hpp"

namespace infoforage {

struct TimeseriesPoint {
  int year = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;

  [[nodiscard]] double ci_half_width() const noexcept { return 1.96 * std_error; }
};

enum class TrendTest { kpss, mann_kendall, pearson, anova };

[[nodiscard]] inline std::string_view to_string(TrendTest t) {
  switch (t) {
    case TrendTest::kpss: return "kpss";
    case TrendTest::mann_kendall: return "mann_kendall";
    case TrendTest::pearson: return "pearson";
    case TrendTest::anova: return "anova";
  }
  return "";
}

struct TrendTestResult {
  TrendTest test = TrendTest::kpss;
  double statistic = 0.0;
  double p_value = 1.0;
  bool reject_at_5pct = false;
  std::map<std::string, double> detail;
};

struct YearValue {
  int year = 0;
  double value = 0.0;
};

enum class Aggregate { median, mean };

// ---------------------------------------------------------------------------
// descriptive helpers

[[nodiscard]] inline double mean_of(std::span<const double> xs) {
  if (xs.empty()) throw InputError("mean of empty sequence");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Sample standard deviation (n - 1 denominator).
[[nodiscard]] inline double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) throw InputError("sample_std needs at least two values");
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// Linear-interpolation quantile (the "type 7" definition), q in [0, 1].
[[nodiscard]] inline double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw InputError("quantile of empty sequence");
  if (!(q >= 0.0 && q <= 1.0)) throw InputError("quantile level outside [0,1]");
  std::sort(xs.begin(), xs.end());
  const double h = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

[[nodiscard]] inline double median_of(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

/// One value per year with data, in increasing year order.
[[nodiscard]] inline std::vector<YearValue> annual_aggregate(std::span<const YearValue> points,
                                                             Aggregate how = Aggregate::median) {
  std::map<int, std::vector<double>> by_year;
  for (const auto& p : points) by_year[p.year].push_back(p.value);
  std::vector<YearValue> out;
  out.reserve(by_year.size());
  for (auto& [year, vals] : by_year)
    out.push_back({year, how == Aggregate::median ? median_of(vals) : mean_of(vals)});
  return out;
}

// ---------------------------------------------------------------------------
// smoothing

/// Centered moving average over [year - window, year + window] for every year
/// between the first and last observed year. Years with fewer than
/// `min_points` observations in the window are omitted.
[[nodiscard]] inline std::vector<TimeseriesPoint> moving_average_ci(std::span<const YearValue> points,
                                                                    int window = 5,
                                                                    std::size_t min_points = 10) {
  if (points.empty()) return {};
  for (const auto& p : points)
    if (!std::isfinite(p.value)) throw InputError("moving_average_ci: non-finite value");
  std::vector<YearValue> sorted(points.begin(), points.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const YearValue& a, const YearValue& b) { return a.year < b.year; });

  std::vector<TimeseriesPoint> out;
  std::vector<double> in_window;
  for (int year = sorted.front().year; year <= sorted.back().year; ++year) {
    in_window.clear();
    for (const auto& p : sorted)
      if (p.year >= year - window && p.year <= year + window) in_window.push_back(p.value);
    if (in_window.size() < min_points || in_window.size() < 2) continue;
    const double se = sample_std(in_window) / std::sqrt(static_cast<double>(in_window.size()));
    out.push_back({year, mean_of(in_window), se, in_window.size()});
  }
  return out;
}

/// Per year, the mean of the category means that exist for that year, with
/// delta-method standard error sqrt(sum SE_i^2) / n. `n` of each output point
/// is the number of contributing categories.
[[nodiscard]] inline std::vector<TimeseriesPoint> combine_categories(
    std::span<const std::vector<TimeseriesPoint>> per_category) {
  struct Acc {
    double sum_mean = 0.0;
    double sum_var = 0.0;
    std::size_t n = 0;
  };
  std::map<int, Acc> by_year;
  for (const auto& series : per_category)
    for (const auto& p : series) {
      auto& a = by_year[p.year];
      a.sum_mean += p.mean;
      a.sum_var += p.std_error * p.std_error;
      ++a.n;
    }
  std::vector<TimeseriesPoint> out;
  for (const auto& [year, a] : by_year) {
    const double n = static_cast<double>(a.n);
    out.push_back({year, a.sum_mean / n, std::sqrt(a.sum_var) / n, a.n});
  }
  return out;
}

// ---------------------------------------------------------------------------
// tests

namespace detail {
inline double two_sided_normal_p(double z) {
  const boost::math::normal standard;
  return std::clamp(2.0 * boost::math::cdf(boost::math::complement(standard, std::abs(z))), 0.0, 1.0);
}
}  // namespace detail

/// Mann-Kendall trend test, normal approximation with tie-corrected variance
/// and continuity correction.
[[nodiscard]] inline TrendTestResult mann_kendall(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 4) throw InputError("mann_kendall: series needs at least 4 values");
  long long s = 0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += (series[j] > series[i]) - (series[j] < series[i]);

  std::vector<double> sorted(series.begin(), series.end());
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_term += t * (t - 1.0) * (2.0 * t + 5.0);
    i = j;
  }
  const double nd = static_cast<double>(n);
  const double var_s = (nd * (nd - 1.0) * (2.0 * nd + 5.0) - tie_term) / 18.0;

  double z = 0.0;
  if (s > 0 && var_s > 0.0) z = (static_cast<double>(s) - 1.0) / std::sqrt(var_s);
  if (s < 0 && var_s > 0.0) z = (static_cast<double>(s) + 1.0) / std::sqrt(var_s);

  TrendTestResult r;
  r.test = TrendTest::mann_kendall;
  r.statistic = static_cast<double>(s);
  r.p_value = detail::two_sided_normal_p(z);
  r.reject_at_5pct = r.p_value < 0.05;
  r.detail = {{"s", static_cast<double>(s)}, {"var_s", var_s}, {"z", z}, {"n", nd}};
  return r;
}

struct KpssCriticalValue {
  double p_value;
  double statistic;
};

// Level-stationarity critical values (Kwiatkowski et al. 1992, Table 1).
inline constexpr KpssCriticalValue kKpssLevelTable[] = {
    {0.10, 0.347}, {0.05, 0.463}, {0.025, 0.574}, {0.01, 0.739}};

/// ⌊12 (n/100)^(1/4)⌋
[[nodiscard]] inline std::size_t kpss_lags(std::size_t n) {
  return static_cast<std::size_t>(std::floor(12.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
}

/// KPSS test of level stationarity with a Bartlett-kernel Newey-West long-run
/// variance. The p-value is interpolated in the critical-value table and
/// clamped to [0.01, 0.1].
[[nodiscard]] inline TrendTestResult kpss_level(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 10) throw InputError("kpss_level: series needs at least 10 values");
  const double m = mean_of(series);
  std::vector<double> e(n);
  for (std::size_t t = 0; t < n; ++t) e[t] = series[t] - m;

  const std::size_t lags = std::min(kpss_lags(n), n - 1);
  double lrv = 0.0;
  for (double x : e) lrv += x * x;
  for (std::size_t l = 1; l <= lags; ++l) {
    double gamma = 0.0;
    for (std::size_t t = l; t < n; ++t) gamma += e[t] * e[t - l];
    lrv += 2.0 * (1.0 - static_cast<double>(l) / static_cast<double>(lags + 1)) * gamma;
  }
  const double nd = static_cast<double>(n);
  lrv /= nd;
  if (!(lrv > 0.0)) throw DegenerateInputError("kpss_level: zero long-run variance");

  double partial = 0.0;
  double eta_num = 0.0;
  for (double x : e) {
    partial += x;
    eta_num += partial * partial;
  }
  const double eta = eta_num / (nd * nd * lrv);

  const auto& tab = kKpssLevelTable;
  double p;
  if (eta <= tab[0].statistic) {
    p = tab[0].p_value;
  } else if (eta >= tab[3].statistic) {
    p = tab[3].p_value;
  } else {
    std::size_t k = 0;
    while (eta > tab[k + 1].statistic) ++k;
    const double w = (eta - tab[k].statistic) / (tab[k + 1].statistic - tab[k].statistic);
    p = tab[k].p_value + w * (tab[k + 1].p_value - tab[k].p_value);
  }

  TrendTestResult r;
  r.test = TrendTest::kpss;
  r.statistic = eta;
  r.p_value = p;
  r.reject_at_5pct = p < 0.05;
  r.detail = {{"lags", static_cast<double>(lags)},
              {"long_run_variance", lrv},
              {"crit_10pct", 0.347},
              {"crit_5pct", 0.463},
              {"crit_2_5pct", 0.574},
              {"crit_1pct", 0.739},
              {"n", nd}};
  return r;
}

/// Pearson correlation with a two-sided Student-t p-value on n - 2 dof.
[[nodiscard]] inline TrendTestResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("pearson: series lengths differ");
  const std::size_t n = x.size();
  if (n < 3) throw InputError("pearson: needs at least 3 pairs");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw InputError("pearson: zero variance input");
  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double dof = static_cast<double>(n - 2);

  double p = 0.0;
  double t = std::copysign(std::numeric_limits<double>::infinity(), r);
  if (std::abs(r) < 1.0) {
    t = r * std::sqrt(dof / (1.0 - r * r));
    const boost::math::students_t dist(dof);
    p = std::clamp(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), 0.0, 1.0);
  }

  TrendTestResult res;
  res.test = TrendTest::pearson;
  res.statistic = r;
  res.p_value = p;
  res.reject_at_5pct = p < 0.05;
  res.detail = {{"r", r}, {"t", t}, {"dof", dof}, {"n", static_cast<double>(n)}};
  return res;
}

/// One-way ANOVA across groups; F on (k - 1, N - k) dof.
[[nodiscard]] inline TrendTestResult anova_oneway(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw InputError("anova_oneway: needs at least two groups");
  std::size_t total = 0;
  double grand = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw InputError("anova_oneway: every group needs at least two values");
    total += g.size();
    grand += std::accumulate(g.begin(), g.end(), 0.0);
  }
  grand /= static_cast<double>(total);

  double ss_between = 0.0;
  double ss_within = 0.0;
  for (const auto& g : groups) {
    const double m = mean_of(g);
    ss_between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double v : g) ss_within += (v - m) * (v - m);
  }
  const double df_between = static_cast<double>(groups.size() - 1);
  const double df_within = static_cast<double>(total - groups.size());
  const double ms_between = ss_between / df_between;
  const double ms_within = ss_within / df_within;
  if (!(ms_within > 0.0)) throw DegenerateInputError("anova_oneway: zero within-group variance");

  const double f = ms_between / ms_within;
  const boost::math::fisher_f dist(df_between, df_within);
  const double p = std::clamp(boost::math::cdf(boost::math::complement(dist, f)), 0.0, 1.0);

  TrendTestResult r;
  r.test = TrendTest::anova;
  r.statistic = f;
  r.p_value = p;
  r.reject_at_5pct = p < 0.05;
  r.detail = {{"ss_between", ss_between}, {"ss_within", ss_within}, {"df_between", df_between},
              {"df_within", df_within},   {"f", f}};
  return r;
}

struct DensityPoint {
  double x = 0.0;
  double density = 0.0;
};

/// Gaussian KDE with Scott bandwidth sigma * n^(-1/5), evaluated on
/// `grid_points` equally spaced points over [min, max] of the data.
[[nodiscard]] inline std::vector<DensityPoint> kde_scott(std::span<const double> values,
                                                         std::size_t grid_points = 256) {
  if (values.size() < 2) throw InputError("kde_scott: needs at least two values");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) throw InputError("kde_scott: all values are equal");
  const double n = static_cast<double>(values.size());
  const double h = sample_std(values) * std::pow(n, -0.2);
  const double norm = 1.0 / (n * h * std::sqrt(2.0 * std::numbers::pi));

  std::vector<DensityPoint> curve(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    double acc = 0.0;
    for (double v : values) {
      const double z = (x - v) / h;
      acc += std::exp(-0.5 * z * z);
    }
    curve[i] = {x, acc * norm};
  }
  return curve;
}

}  // namespace infoforage
