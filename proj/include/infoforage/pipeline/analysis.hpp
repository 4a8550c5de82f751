#pragma once

// Analyses over measure records: per-category trend tests with smoothed
// series, between-category comparison, and year-joined correlation.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "infoforage/pipeline/records.hpp"
#include "infoforage/pipeline/svg.hpp"
#include "infoforage/trend.hpp"

namespace infoforage::pipeline {

enum class MeasureName { word_entropy_bits, type_token_ratio, zipf_exponent };

inline constexpr MeasureName kAllMeasures[] = {MeasureName::word_entropy_bits, MeasureName::type_token_ratio,
                                               MeasureName::zipf_exponent};

[[nodiscard]] inline std::string_view to_string(MeasureName m) {
  switch (m) {
    case MeasureName::word_entropy_bits: return "word_entropy_bits";
    case MeasureName::type_token_ratio: return "type_token_ratio";
    case MeasureName::zipf_exponent: return "zipf_exponent";
  }
  return "";
}

[[nodiscard]] inline MeasureName parse_measure(std::string_view s) {
  if (s == "word_entropy_bits" || s == "entropy" || s == "h1") return MeasureName::word_entropy_bits;
  if (s == "type_token_ratio" || s == "ttr") return MeasureName::type_token_ratio;
  if (s == "zipf_exponent" || s == "zipf" || s == "alpha") return MeasureName::zipf_exponent;
  throw InputError("unknown measure '" + std::string(s) + "'");
}

[[nodiscard]] inline double measure_value(const MeasureRecord& r, MeasureName m) {
  switch (m) {
    case MeasureName::word_entropy_bits: return r.word_entropy_bits;
    case MeasureName::type_token_ratio: return r.type_token_ratio;
    case MeasureName::zipf_exponent: return r.zipf_exponent;
  }
  return 0.0;
}

namespace detail {

inline std::vector<Category> categories_in(const std::vector<MeasureRecord>& records,
                                           const std::vector<Category>& filter) {
  std::set<Category> present;
  for (const auto& r : records) present.insert(r.category);
  std::vector<Category> out;
  for (auto c : present)
    if (filter.empty() || std::find(filter.begin(), filter.end(), c) != filter.end()) out.push_back(c);
  return out;
}

inline ordered_json to_json(const TrendTestResult& t) {
  ordered_json j;
  j["test"] = std::string(to_string(t.test));
  j["statistic"] = t.statistic;
  j["p_value"] = t.p_value;
  j["reject_at_5pct"] = t.reject_at_5pct;
  ordered_json d = ordered_json::object();
  for (const auto& [k, v] : t.detail) d[k] = v;
  j["detail"] = d;
  return j;
}

inline std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// trend

struct TrendOptions {
  std::vector<MeasureName> measures = {std::begin(kAllMeasures), std::end(kAllMeasures)};
  std::vector<Category> categories;  // empty = every category present
  int start_year = 1900;
  int end_year = 2009;
  Aggregate aggregate = Aggregate::median;
  int window = 5;
  std::size_t min_points = 10;
  std::size_t min_years = 10;
};

struct CategoryTrend {
  Category category = Category::other;
  MeasureName measure = MeasureName::word_entropy_bits;
  std::vector<YearValue> annual;
  TrendTestResult kpss;
  TrendTestResult mann_kendall;
  std::vector<TimeseriesPoint> smoothed;
};

struct TrendReport {
  std::string config_hash;
  TrendOptions options;
  std::vector<Category> categories;
  std::vector<CategoryTrend> cells;  // category-major, then measure
  std::map<MeasureName, std::vector<TimeseriesPoint>> combined;

  [[nodiscard]] const CategoryTrend& cell(Category c, MeasureName m) const {
    for (const auto& x : cells)
      if (x.category == c && x.measure == m) return x;
    throw InputError("no trend cell for " + std::string(to_string(c)) + "/" + std::string(to_string(m)));
  }
};

/// Annual aggregation, KPSS and Mann-Kendall per category and measure over
/// [start_year, end_year]; moving-average smoothing per category and the
/// delta-method combination across categories.
[[nodiscard]] inline TrendReport run_trend(const std::vector<MeasureRecord>& records, const TrendOptions& opts) {
  if (opts.start_year > opts.end_year) throw InputError("trend: start_year is after end_year");
  if (opts.measures.empty()) throw InputError("trend: no measures requested");
  TrendReport report;
  report.config_hash = common_config_hash(records);
  report.options = opts;

  std::vector<MeasureRecord> in_range;
  for (const auto& r : records)
    if (r.year && *r.year >= opts.start_year && *r.year <= opts.end_year) in_range.push_back(r);

  report.categories = detail::categories_in(in_range, opts.categories);
  for (auto c : opts.categories)
    if (std::find(report.categories.begin(), report.categories.end(), c) == report.categories.end())
      throw InputError("trend: category '" + std::string(to_string(c)) + "' has no data in " +
                       std::to_string(opts.start_year) + "-" + std::to_string(opts.end_year));
  if (report.categories.empty()) throw InputError("trend: no dated records in the requested year range");

  for (auto category : report.categories) {
    for (auto measure : opts.measures) {
      std::vector<YearValue> points;
      for (const auto& r : in_range)
        if (r.category == category) points.push_back({*r.year, measure_value(r, measure)});
      CategoryTrend cell;
      cell.category = category;
      cell.measure = measure;
      cell.annual = annual_aggregate(points, opts.aggregate);
      if (cell.annual.size() < opts.min_years)
        throw InputError("trend: category '" + std::string(to_string(category)) + "' has only " +
                         std::to_string(cell.annual.size()) + " years of data in range (need " +
                         std::to_string(opts.min_years) + ")");
      std::vector<double> series;
      for (const auto& p : cell.annual) series.push_back(p.value);
      cell.kpss = kpss_level(series);
      cell.mann_kendall = mann_kendall(series);
      cell.smoothed = moving_average_ci(points, opts.window, opts.min_points);
      report.cells.push_back(std::move(cell));
    }
  }
  for (auto measure : opts.measures) {
    std::vector<std::vector<TimeseriesPoint>> per_category;
    for (const auto& cell : report.cells)
      if (cell.measure == measure) per_category.push_back(cell.smoothed);
    report.combined[measure] = combine_categories(per_category);
  }
  return report;
}

/// "(KPSS p, MK p)" cell; KPSS at the clamp floor prints as "<0.01".
[[nodiscard]] inline std::string format_trend_cell(const CategoryTrend& c) {
  const std::string kpss = c.kpss.p_value <= 0.01 ? "<0.01" : detail::fixed2(c.kpss.p_value);
  return "(" + kpss + ", " + detail::fixed2(c.mann_kendall.p_value) + ")";
}

/// One row per category, one column per measure.
[[nodiscard]] inline std::string trend_table_text(const TrendReport& report) {
  std::string out = "| category |";
  for (auto m : report.options.measures) out += " " + std::string(to_string(m)) + " |";
  out += "\n|---|";
  for (std::size_t i = 0; i < report.options.measures.size(); ++i) out += "---|";
  out += "\n";
  for (auto c : report.categories) {
    out += "| " + std::string(to_string(c)) + " |";
    for (auto m : report.options.measures) out += " " + format_trend_cell(report.cell(c, m)) + " |";
    out += "\n";
  }
  return out;
}

[[nodiscard]] inline ordered_json trend_report_json(const TrendReport& report) {
  ordered_json j;
  j["tool_version"] = std::string(kToolVersion);
  j["config_hash"] = report.config_hash;
  j["start_year"] = report.options.start_year;
  j["end_year"] = report.options.end_year;
  j["aggregate"] = report.options.aggregate == Aggregate::median ? "median" : "mean";
  ordered_json measures = ordered_json::array();
  for (auto m : report.options.measures) measures.push_back(std::string(to_string(m)));
  j["measures"] = measures;

  ordered_json table = ordered_json::array();
  for (auto c : report.categories) {
    ordered_json row;
    row["category"] = std::string(to_string(c));
    for (auto m : report.options.measures) {
      const auto& cell = report.cell(c, m);
      ordered_json v;
      v["kpss_p"] = cell.kpss.p_value;
      v["mk_p"] = cell.mann_kendall.p_value;
      v["kpss_reject"] = cell.kpss.reject_at_5pct;
      v["mk_reject"] = cell.mann_kendall.reject_at_5pct;
      v["cell"] = format_trend_cell(cell);
      row[std::string(to_string(m))] = v;
    }
    table.push_back(row);
  }
  j["table"] = table;

  ordered_json tests = ordered_json::array();
  for (const auto& cell : report.cells) {
    ordered_json t;
    t["category"] = std::string(to_string(cell.category));
    t["measure"] = std::string(to_string(cell.measure));
    t["n_years"] = cell.annual.size();
    t["kpss"] = detail::to_json(cell.kpss);
    t["mann_kendall"] = detail::to_json(cell.mann_kendall);
    tests.push_back(t);
  }
  j["tests"] = tests;
  j["table_text"] = trend_table_text(report);
  return j;
}

/// Columns: measure,category,year,mean,std_error,ci_low,ci_high,n. The
/// cross-category series uses category "combined".
[[nodiscard]] inline std::string trend_smoothed_csv(const TrendReport& report) {
  std::string out = "# tool_version=" + std::string(kToolVersion) + " config_hash=" + report.config_hash + "\n";
  out += "measure,category,year,mean,std_error,ci_low,ci_high,n\n";
  auto emit = [&](MeasureName m, std::string_view cat, const std::vector<TimeseriesPoint>& pts) {
    for (const auto& p : pts)
      out += join_csv({std::string(to_string(m)), std::string(cat), std::to_string(p.year), format_number(p.mean),
                       format_number(p.std_error), format_number(p.mean - p.ci_half_width()),
                       format_number(p.mean + p.ci_half_width()), std::to_string(p.n)}) +
             "\n";
  };
  for (const auto& cell : report.cells) emit(cell.measure, to_string(cell.category), cell.smoothed);
  for (const auto& [m, pts] : report.combined) emit(m, "combined", pts);
  return out;
}

// ---------------------------------------------------------------------------
// compare

struct CompareOptions {
  std::vector<MeasureName> measures = {std::begin(kAllMeasures), std::end(kAllMeasures)};
  std::vector<Category> categories;  // empty = every category present
  std::optional<int> start_year;
  std::optional<int> end_year;
  std::size_t kde_points = 256;
};

struct CategoryDistribution {
  Category category = Category::other;
  std::size_t n = 0;
  double q1 = 0.0, median = 0.0, q3 = 0.0;
  std::vector<DensityPoint> kde;
};

struct MeasureComparison {
  MeasureName measure = MeasureName::word_entropy_bits;
  TrendTestResult anova;
  std::vector<CategoryDistribution> distributions;
};

struct CompareReport {
  std::string config_hash;
  std::vector<MeasureComparison> measures;
};

[[nodiscard]] inline CompareReport run_compare(const std::vector<MeasureRecord>& records, const CompareOptions& opts) {
  CompareReport report;
  report.config_hash = common_config_hash(records);
  std::vector<MeasureRecord> selected;
  for (const auto& r : records) {
    if (opts.start_year && (!r.year || *r.year < *opts.start_year)) continue;
    if (opts.end_year && (!r.year || *r.year > *opts.end_year)) continue;
    selected.push_back(r);
  }
  const auto categories = detail::categories_in(selected, opts.categories);
  if (categories.size() < 2) throw InputError("compare: needs at least two categories with data");

  for (auto measure : opts.measures) {
    MeasureComparison mc;
    mc.measure = measure;
    std::vector<std::vector<double>> groups;
    for (auto c : categories) {
      std::vector<double> vals;
      for (const auto& r : selected)
        if (r.category == c) vals.push_back(measure_value(r, measure));
      if (vals.size() < 2)
        throw InputError("compare: category '" + std::string(to_string(c)) + "' has fewer than 2 samples");
      CategoryDistribution d;
      d.category = c;
      d.n = vals.size();
      d.q1 = quantile(vals, 0.25);
      d.median = quantile(vals, 0.5);
      d.q3 = quantile(vals, 0.75);
      const auto [lo, hi] = std::minmax_element(vals.begin(), vals.end());
      if (*hi > *lo) d.kde = kde_scott(vals, opts.kde_points);
      mc.distributions.push_back(std::move(d));
      groups.push_back(std::move(vals));
    }
    mc.anova = anova_oneway(groups);
    report.measures.push_back(std::move(mc));
  }
  return report;
}

[[nodiscard]] inline ordered_json compare_report_json(const CompareReport& report) {
  ordered_json j;
  j["tool_version"] = std::string(kToolVersion);
  j["config_hash"] = report.config_hash;
  ordered_json ms = ordered_json::array();
  for (const auto& mc : report.measures) {
    ordered_json m;
    m["measure"] = std::string(to_string(mc.measure));
    m["anova"] = detail::to_json(mc.anova);
    ordered_json dists = ordered_json::array();
    for (const auto& d : mc.distributions) {
      ordered_json dj;
      dj["category"] = std::string(to_string(d.category));
      dj["n"] = d.n;
      dj["q1"] = d.q1;
      dj["median"] = d.median;
      dj["q3"] = d.q3;
      dists.push_back(dj);
    }
    m["categories"] = dists;
    ms.push_back(m);
  }
  j["measures"] = ms;
  return j;
}

/// Columns: measure,category,x,density
[[nodiscard]] inline std::string compare_kde_csv(const CompareReport& report) {
  std::string out = "# tool_version=" + std::string(kToolVersion) + " config_hash=" + report.config_hash + "\n";
  out += "measure,category,x,density\n";
  for (const auto& mc : report.measures)
    for (const auto& d : mc.distributions)
      for (const auto& p : d.kde)
        out += join_csv({std::string(to_string(mc.measure)), std::string(to_string(d.category)), format_number(p.x),
                         format_number(p.density)}) +
               "\n";
  return out;
}

[[nodiscard]] inline std::string compare_kde_svg(const MeasureComparison& mc) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#7f7f7f"};
  SvgPlot plot("Distribution of " + std::string(to_string(mc.measure)), std::string(to_string(mc.measure)),
               "density");
  std::size_t k = 0;
  for (const auto& d : mc.distributions) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : d.kde) pts.emplace_back(p.x, p.density);
    plot.line(std::string(to_string(d.category)), palette[k++ % 6], std::move(pts));
  }
  return plot.render();
}

// ---------------------------------------------------------------------------
// correlate

/// Reads a two-column CSV with header "year,value".
[[nodiscard]] inline std::vector<YearValue> read_year_series(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.header.size() != 2 || t.header[0] != "year" || t.header[1] != "value")
    throw InputError(path + ": expected header 'year,value'");
  std::vector<YearValue> out;
  std::set<int> seen;
  for (const auto& row : t.rows) {
    if (row.size() != 2) throw InputError(path + ": expected 2 fields per row");
    YearValue yv{static_cast<int>(parse_integer(row[0], "year")), parse_number(row[1], "value")};
    if (!seen.insert(yv.year).second) throw InputError(path + ": duplicate year " + row[0]);
    out.push_back(yv);
  }
  return out;
}

struct CorrelationReport {
  std::vector<int> years;
  TrendTestResult pearson;
};

[[nodiscard]] inline CorrelationReport run_correlate(const std::vector<YearValue>& a, const std::vector<YearValue>& b) {
  std::map<int, double> right;
  for (const auto& p : b) right[p.year] = p.value;
  std::map<int, double> left;
  for (const auto& p : a) left[p.year] = p.value;
  CorrelationReport rep;
  std::vector<double> x, y;
  for (const auto& [year, v] : left) {
    auto it = right.find(year);
    if (it == right.end()) continue;
    rep.years.push_back(year);
    x.push_back(v);
    y.push_back(it->second);
  }
  if (rep.years.size() < 3)
    throw InputError("correlate: only " + std::to_string(rep.years.size()) + " overlapping years (need 3)");
  rep.pearson = pearson(x, y);
  return rep;
}

[[nodiscard]] inline ordered_json correlation_report_json(const CorrelationReport& rep) {
  ordered_json j;
  j["tool_version"] = std::string(kToolVersion);
  j["n_overlap"] = rep.years.size();
  j["first_year"] = rep.years.front();
  j["last_year"] = rep.years.back();
  j["r"] = rep.pearson.statistic;
  j["p_value"] = rep.pearson.p_value;
  j["pearson"] = detail::to_json(rep.pearson);
  return j;
}

}  // namespace infoforage::pipeline
