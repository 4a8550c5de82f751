// infoforage: corpus measures, trend analyses and foraging-model simulations.
//
//   infoforage measure   MANIFEST            clean, truncate and measure each text
//   infoforage trend     MEASURES            KPSS + Mann-Kendall per category
//   infoforage compare   MEASURES            ANOVA + KDE across categories
//   infoforage correlate SERIES_A SERIES_B   Pearson correlation on shared years
//   infoforage simulate  {diet_sweep,frontier}
//
// Exit codes: 0 success, 1 no usable output (e.g. every manifest row failed),
// 2 invalid input or configuration.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "infoforage/pipeline/analysis.hpp"
#include "infoforage/pipeline/measure.hpp"
#include "infoforage/pipeline/records.hpp"
#include "infoforage/pipeline/simulate.hpp"

namespace fs = std::filesystem;
using namespace infoforage;
using namespace infoforage::pipeline;

namespace {

struct GlobalOptions {
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::string format;
};

std::size_t resolve_threads(const GlobalOptions& g) {
  if (g.threads) return std::max<std::size_t>(1, *g.threads);
  if (const char* env = std::getenv("INFOFORAGE_THREADS")) {
    try {
      const long long n = parse_integer(env, "INFOFORAGE_THREADS");
      if (n >= 1) return static_cast<std::size_t>(n);
    } catch (const InputError&) {
    }
    std::cerr << "warning: ignoring invalid INFOFORAGE_THREADS='" << env << "'\n";
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// report.json -> report_<suffix>
std::string sibling(const std::string& path, const std::string& suffix) {
  fs::path p(path);
  return (p.parent_path() / (p.stem().string() + "_" + suffix)).string();
}

std::vector<Category> parse_categories(const std::vector<std::string>& names) {
  std::vector<Category> out;
  for (const auto& n : names) out.push_back(parse_category(n));
  return out;
}

std::vector<MeasureName> parse_measures(const std::vector<std::string>& names) {
  std::vector<MeasureName> out;
  for (const auto& n : names) out.push_back(parse_measure(n));
  if (out.empty()) out.assign(std::begin(kAllMeasures), std::end(kAllMeasures));
  return out;
}

int cmd_measure(const GlobalOptions& g, const std::string& manifest, std::size_t sample_size) {
  const auto rows = read_manifest(manifest);
  MeasureOptions opts;
  opts.config.sample_size = sample_size;
  opts.threads = resolve_threads(g);
  const MeasureReport report = run_measure(rows, opts);
  for (const auto& s : report.skipped) std::cerr << "skip " << s.source_id << " (" << s.path << "): " << s.reason << "\n";

  const std::string out = g.out.empty() ? "measures.jsonl" : g.out;
  const RecordFormat fmt = g.format == "csv" ? RecordFormat::csv : RecordFormat::jsonl;
  write_records(out, report.records, fmt);
  std::cerr << report.records.size() << " records written to " << out << ", " << report.skipped.size()
            << " skipped\n";
  return report.records.empty() ? 1 : 0;
}

int cmd_trend(const GlobalOptions& g, const std::string& measures, const TrendOptions& opts,
              const std::string& smoothed_path) {
  const auto records = read_records(measures);
  const TrendReport report = run_trend(records, opts);
  const std::string out = g.out.empty() ? "trend_report.json" : g.out;
  write_file(out, trend_report_json(report).dump(2) + "\n");
  const std::string csv = smoothed_path.empty() ? sibling(out, "smoothed.csv") : smoothed_path;
  write_file(csv, trend_smoothed_csv(report));
  std::cout << trend_table_text(report);
  std::cerr << "report: " << out << "\nsmoothed series: " << csv << "\n";
  return 0;
}

int cmd_compare(const GlobalOptions& g, const std::string& measures, const CompareOptions& opts) {
  const auto records = read_records(measures);
  const CompareReport report = run_compare(records, opts);
  const std::string out = g.out.empty() ? "compare_report.json" : g.out;
  write_file(out, compare_report_json(report).dump(2) + "\n");
  write_file(sibling(out, "kde.csv"), compare_kde_csv(report));
  if (g.format == "svg")
    for (const auto& mc : report.measures)
      write_file(sibling(out, std::string(to_string(mc.measure)) + ".svg"), compare_kde_svg(mc));
  for (const auto& mc : report.measures)
    std::cout << to_string(mc.measure) << ": F = " << mc.anova.statistic << ", p = " << mc.anova.p_value << "\n";
  return 0;
}

int cmd_correlate(const GlobalOptions& g, const std::string& a, const std::string& b) {
  const auto rep = run_correlate(read_year_series(a), read_year_series(b));
  auto j = correlation_report_json(rep);
  j["config_hash"] = short_digest(read_file(a) + "\n--\n" + read_file(b));
  const std::string out = g.out.empty() ? "correlation.json" : g.out;
  write_file(out, j.dump(2) + "\n");
  std::cout << "r = " << rep.pearson.statistic << ", p = " << rep.pearson.p_value << ", n = " << rep.years.size()
            << "\n";
  return 0;
}

int cmd_simulate(const GlobalOptions& g, const std::string& kind_name, const std::string& config_path,
                 const std::vector<std::string>& sets) {
  const SimulationKind kind = parse_simulation_kind(kind_name);
  KeyValues kv;
  if (!config_path.empty()) kv = parse_key_values(read_file(config_path));
  for (const auto& s : sets) {
    const auto more = parse_key_values(s);
    if (more.empty()) throw InputError("--set expects key=value, got '" + s + "'");
    for (const auto& [k, v] : more) kv[k] = v;
  }
  const auto result = run_simulation(kind, kv, g.seed, resolve_threads(g));
  for (const auto& w : result.warnings) std::cerr << w << "\n";
  const std::string out = g.out.empty() ? kind_name + ".csv" : g.out;
  write_file(out, result.csv);
  if (g.format == "svg") write_file(sibling(out, "plot.svg"), result.svg);
  std::cerr << "wrote " << out << " (config_hash " << result.config_hash << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"infoforage: information foraging model and lexical trend analysis"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::size_t threads = 0;
  std::uint64_t seed = 0;
  app.add_option("--out,-o", g.out, "Output file");
  auto* seed_opt = app.add_option("--seed", seed, "Random seed (simulate)");
  auto* threads_opt = app.add_option("--threads", threads, "Worker threads (overrides INFOFORAGE_THREADS)")
                          ->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format: jsonl|csv for measure; svg adds plots")
      ->check(CLI::IsMember({"csv", "jsonl", "svg"}));

  // measure
  auto* measure = app.add_subcommand("measure", "Clean, truncate and measure every text in a manifest");
  std::string manifest;
  std::size_t sample_size = 2000;
  measure->add_option("manifest", manifest, "CSV with header path,year,category,profile,source_id")->required();
  measure->add_option("--sample-size", sample_size, "Tokens kept per sample (last N)")->check(CLI::PositiveNumber);

  // trend
  auto* trend = app.add_subcommand("trend", "KPSS and Mann-Kendall trend tests per category");
  std::string trend_input, smoothed_csv, aggregate = "median";
  std::vector<std::string> trend_measures, trend_categories;
  TrendOptions trend_opts;
  trend->add_option("measures", trend_input, "Measure records (JSONL or CSV)")->required();
  trend->add_option("--measure", trend_measures, "Measures to test (default: all)")->delimiter(',');
  trend->add_option("--categories", trend_categories, "Category filter (default: all)")->delimiter(',');
  trend->add_option("--start-year", trend_opts.start_year, "First year (default 1900)");
  trend->add_option("--end-year", trend_opts.end_year, "Last year (default 2009)");
  trend->add_option("--aggregate", aggregate, "Annual aggregate")->check(CLI::IsMember({"median", "mean"}));
  trend->add_option("--smoothed-csv", smoothed_csv, "Smoothed series CSV (default: <out>_smoothed.csv)");

  // compare
  auto* compare = app.add_subcommand("compare", "ANOVA and KDE distributions across categories");
  std::string compare_input;
  std::vector<std::string> compare_measures, compare_categories;
  std::optional<int> compare_start, compare_end;
  compare->add_option("measures", compare_input, "Measure records (JSONL or CSV)")->required();
  compare->add_option("--measure", compare_measures, "Measures (default: all)")->delimiter(',');
  compare->add_option("--categories", compare_categories, "Category filter (default: all)")->delimiter(',');
  compare->add_option("--start-year", compare_start, "Only samples from this year on");
  compare->add_option("--end-year", compare_end, "Only samples up to this year");

  // correlate
  auto* correlate = app.add_subcommand("correlate", "Pearson correlation of two year,value series");
  std::string series_a, series_b;
  correlate->add_option("series_a", series_a, "CSV with header year,value")->required();
  correlate->add_option("series_b", series_b, "CSV with header year,value")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run a model simulation and write CSV (svg with --format svg)");
  simulate->footer(
      "diet_sweep CSV columns: prevalence,status,profitability,diet_rate,diet_min_profitability\n"
      "  status is consumed, ignored (survived removal) or empty (no items drawn)\n"
      "  keys: prevalence_grid, items_per_unit_prevalence, item_encounter_rate, rate_low,\n"
      "        rate_high, removal_prob, handling_time, seed\n"
      "frontier CSV columns: merged_rate,mean_item_rate,env_rate,u_min,feasible\n"
      "  u_min is empty where mean_item_rate <= env_rate\n"
      "  keys: merged_rate_grid, mean_item_rate_grid, env_rate\n"
      "The first CSV line is a comment recording tool_version, seed, rng and config_hash.");
  std::string kind, config_path;
  std::vector<std::string> sets;
  simulate->add_option("kind", kind, "diet_sweep or frontier")->required();
  simulate->add_option("--config", config_path, "key = value configuration file");
  simulate->add_option("--set", sets, "Override one key: --set key=value");

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) g.seed = seed;
  if (threads_opt->count() > 0) g.threads = threads;

  try {
    if (*measure) return cmd_measure(g, manifest, sample_size);
    if (*trend) {
      trend_opts.measures = parse_measures(trend_measures);
      trend_opts.categories = parse_categories(trend_categories);
      trend_opts.aggregate = aggregate == "mean" ? Aggregate::mean : Aggregate::median;
      return cmd_trend(g, trend_input, trend_opts, smoothed_csv);
    }
    if (*compare) {
      CompareOptions opts;
      opts.measures = parse_measures(compare_measures);
      opts.categories = parse_categories(compare_categories);
      opts.start_year = compare_start;
      opts.end_year = compare_end;
      return cmd_compare(g, compare_input, opts);
    }
    if (*correlate) return cmd_correlate(g, series_a, series_b);
    if (*simulate) return cmd_simulate(g, kind, config_path, sets);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
