#pragma once

// Simulation runs driven by key=value configuration.
//
// diet_sweep keys: prevalence_grid (comma list), items_per_unit_prevalence,
//   item_encounter_rate, rate_low, rate_high, removal_prob, handling_time, seed
// frontier keys: merged_rate_grid, mean_item_rate_grid (comma lists), env_rate

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "infoforage/pipeline/csv.hpp"
#include "infoforage/pipeline/digest.hpp"
#include "infoforage/pipeline/svg.hpp"
#include "infoforage/simulation.hpp"

namespace infoforage::pipeline {

enum class SimulationKind { diet_sweep, frontier };

[[nodiscard]] inline SimulationKind parse_simulation_kind(std::string_view s) {
  if (s == "diet_sweep") return SimulationKind::diet_sweep;
  if (s == "frontier") return SimulationKind::frontier;
  throw InputError("unknown simulation kind '" + std::string(s) + "' (expected diet_sweep or frontier)");
}

using KeyValues = std::map<std::string, std::string>;

namespace detail {
inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

inline std::vector<double> parse_list(std::string_view s, std::string_view key) {
  std::string body = trim(s);
  if (!body.empty() && body.front() == '[' && body.back() == ']') body = body.substr(1, body.size() - 2);
  std::vector<double> out;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = trim(item);
    if (!t.empty()) out.push_back(parse_number(t, key));
  }
  if (out.empty()) throw InputError("config key '" + std::string(key) + "' has an empty list");
  return out;
}

inline std::string list_text(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + format_number(xs[i]);
  return out;
}
}  // namespace detail

/// Parses `key = value` lines; '#' starts a comment, blank lines and
/// [section] headers are ignored.
[[nodiscard]] inline KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::stringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty() || t.front() == '[') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw InputError("config line " + std::to_string(n) + ": expected key = value");
    kv[detail::trim(t.substr(0, eq))] = detail::trim(t.substr(eq + 1));
  }
  return kv;
}

struct SimulationOutput {
  std::string csv;
  std::string svg;
  std::string config_hash;
  std::vector<std::string> warnings;
};

namespace detail {
inline void reject_unknown(const KeyValues& kv, const std::vector<std::string_view>& known) {
  std::string unknown;
  for (const auto& [k, v] : kv)
    if (std::find(known.begin(), known.end(), k) == known.end()) unknown += (unknown.empty() ? "" : ", ") + k;
  if (!unknown.empty()) {
    std::string allowed;
    for (auto k : known) allowed += (allowed.empty() ? "" : ", ") + std::string(k);
    throw InputError("unknown config keys: " + unknown + " (allowed: " + allowed + ")");
  }
}
}  // namespace detail

[[nodiscard]] inline DietSweepConfig diet_sweep_config(const KeyValues& kv) {
  detail::reject_unknown(kv, {"prevalence_grid", "items_per_unit_prevalence", "item_encounter_rate", "rate_low",
                              "rate_high", "removal_prob", "handling_time", "seed"});
  DietSweepConfig c;
  for (const auto& [k, v] : kv) {
    if (k == "prevalence_grid") c.prevalence_grid = detail::parse_list(v, k);
    else if (k == "items_per_unit_prevalence") c.items_per_unit_prevalence = parse_number(v, k);
    else if (k == "item_encounter_rate") c.item_encounter_rate = parse_number(v, k);
    else if (k == "rate_low") c.rate_low = parse_number(v, k);
    else if (k == "rate_high") c.rate_high = parse_number(v, k);
    else if (k == "removal_prob") c.removal_prob = parse_number(v, k);
    else if (k == "handling_time") c.handling_time = parse_number(v, k);
    else if (k == "seed") c.seed = static_cast<std::uint64_t>(parse_integer(v, k));
  }
  validate(c);
  return c;
}

[[nodiscard]] inline FrontierConfig frontier_config(const KeyValues& kv) {
  detail::reject_unknown(kv, {"merged_rate_grid", "mean_item_rate_grid", "env_rate"});
  FrontierConfig c = default_frontier_config();
  for (const auto& [k, v] : kv) {
    if (k == "merged_rate_grid") c.merged_rate_grid = detail::parse_list(v, k);
    else if (k == "mean_item_rate_grid") c.mean_item_rate_grid = detail::parse_list(v, k);
    else if (k == "env_rate") c.env_rate = parse_number(v, k);
  }
  return c;
}

[[nodiscard]] inline std::string canonical(const DietSweepConfig& c) {
  return "kind=diet_sweep\nprevalence_grid=" + detail::list_text(c.prevalence_grid) +
         "\nitems_per_unit_prevalence=" + format_number(c.items_per_unit_prevalence) +
         "\nitem_encounter_rate=" + format_number(c.item_encounter_rate) + "\nrate_low=" + format_number(c.rate_low) +
         "\nrate_high=" + format_number(c.rate_high) + "\nremoval_prob=" + format_number(c.removal_prob) +
         "\nhandling_time=" + format_number(c.handling_time) + "\nseed=" + std::to_string(c.seed) +
         "\nrng=" + std::string(kRngName) + "\n";
}

[[nodiscard]] inline std::string canonical(const FrontierConfig& c) {
  return "kind=frontier\nmerged_rate_grid=" + detail::list_text(c.merged_rate_grid) +
         "\nmean_item_rate_grid=" + detail::list_text(c.mean_item_rate_grid) + "\nenv_rate=" +
         format_number(c.env_rate) + "\n";
}

/// CSV columns: prevalence,status,profitability,diet_rate,diet_min_profitability
/// with status "consumed" or "ignored" (ignored items that survived removal);
/// a grid point that drew no items yields one row with status "empty".
[[nodiscard]] inline SimulationOutput run_diet_sweep(const DietSweepConfig& c, std::size_t threads = 1) {
  SimulationOutput out;
  out.config_hash = short_digest(canonical(c));
  const auto points = diet_sweep(c, threads);
  out.csv = "# tool_version=" + std::string(kToolVersion) + " kind=diet_sweep seed=" + std::to_string(c.seed) +
            " rng=" + std::string(kRngName) + " config_hash=" + out.config_hash + "\n";
  out.csv += "prevalence,status,profitability,diet_rate,diet_min_profitability\n";
  SvgPlot plot("Information diet vs prevalence", "information prevalence", "item utility rate r_i");
  plot.log_x();
  std::vector<std::pair<double, double>> eaten, ignored;
  for (const auto& p : points) {
    const std::string tail = "," + format_number(p.diet_rate) + "," + format_number(p.diet_min_profitability) + "\n";
    if (p.consumed.empty() && p.survived_ignored.empty())
      out.csv += format_number(p.prevalence) + ",empty," + tail;
    for (double r : p.consumed) {
      out.csv += format_number(p.prevalence) + ",consumed," + format_number(r) + tail;
      eaten.emplace_back(p.prevalence, r);
    }
    for (double r : p.survived_ignored) {
      out.csv += format_number(p.prevalence) + ",ignored," + format_number(r) + tail;
      ignored.emplace_back(p.prevalence, r);
    }
  }
  plot.scatter("ignored", "#9a9a9a", std::move(ignored));
  plot.scatter("consumed", "#1f77b4", std::move(eaten));
  out.svg = plot.render();
  return out;
}

/// CSV columns: merged_rate,mean_item_rate,env_rate,u_min,feasible. u_min is
/// empty where infeasible.
[[nodiscard]] inline SimulationOutput run_frontier(const FrontierConfig& c) {
  SimulationOutput out;
  out.config_hash = short_digest(canonical(c));
  const FrontierGrid g = viability_frontier(c);
  out.csv = "# tool_version=" + std::string(kToolVersion) + " kind=frontier config_hash=" + out.config_hash + "\n";
  out.csv += "merged_rate,mean_item_rate,env_rate,u_min,feasible\n";
  SvgPlot plot("Minimum viable item size", "information prevalence lambda_m", "u_min");
  plot.log_x().log_y();
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  std::size_t colour = 0;
  for (std::size_t row = 0; row < g.mean_item_rates.size(); ++row) {
    std::vector<std::pair<double, double>> line;
    for (std::size_t col = 0; col < g.merged_rates.size(); ++col) {
      const auto& u = g.min_size[row][col];
      out.csv += format_number(g.merged_rates[col]) + "," + format_number(g.mean_item_rates[row]) + "," +
                 format_number(g.env_rate) + "," + (u ? format_number(*u) : std::string()) + "," +
                 (u ? "true" : "false") + "\n";
      if (u) line.emplace_back(g.merged_rates[col], *u);
    }
    if (!line.empty())
      plot.line("r_m=" + format_number(g.mean_item_rates[row]), palette[colour++ % 6], std::move(line));
  }
  out.svg = plot.render();
  return out;
}

/// Resolves config text plus a seed override and runs the simulation. A
/// diet_sweep without any seed runs with seed 0 and records a warning.
[[nodiscard]] inline SimulationOutput run_simulation(SimulationKind kind, const KeyValues& config,
                                                     std::optional<std::uint64_t> seed_override,
                                                     std::size_t threads = 1) {
  if (kind == SimulationKind::frontier) {
    return run_frontier(frontier_config(config));
  }
  KeyValues kv = config;
  std::vector<std::string> warnings;
  if (seed_override) {
    kv["seed"] = std::to_string(*seed_override);
  } else if (!kv.contains("seed")) {
    kv["seed"] = "0";
    warnings.push_back("warning: no seed given; using default seed 0");
  }
  auto out = run_diet_sweep(diet_sweep_config(kv), threads);
  out.warnings = std::move(warnings);
  return out;
}

}  // namespace infoforage::pipeline
