#pragma once

// Synthetic experiments on the diet model: the prevalence sweep showing
// increasing selectivity, and the minimum viable item size frontier for media
// platforms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "infoforage/errors.hpp"
#include "infoforage/foraging.hpp"
#include "infoforage/parallel.hpp"

namespace infoforage {

inline constexpr std::string_view kRngName = "mt19937_64/splitmix64-stream";

/// Independent generator for grid point `stream` of a run seeded with `seed`.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream) : engine_(mix(mix(seed) ^ mix(stream + 1))) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

struct DietSweepConfig {
  std::vector<double> prevalence_grid = {5, 10, 20, 40, 80, 160, 320, 640, 1280, 2560};
  double items_per_unit_prevalence = 100.0;  // items drawn = round(k * prevalence)
  double item_encounter_rate = 0.01;         // every item's own encounter rate
  double rate_low = 20.0;
  double rate_high = 30.0;
  double removal_prob = 0.8;  // chance an ignored item is removed
  double handling_time = 1.0;
  std::uint64_t seed = 0;
};

struct SweepPoint {
  double prevalence = 0.0;
  std::vector<double> consumed;          // profitabilities of diet members
  std::vector<double> survived_ignored;  // ignored items that escaped removal
  double diet_rate = 0.0;
  double diet_min_profitability = 0.0;  // 0 for an empty diet
};

inline void validate(const DietSweepConfig& c) {
  if (c.prevalence_grid.empty()) throw InputError("diet_sweep: empty prevalence grid");
  for (std::size_t i = 0; i < c.prevalence_grid.size(); ++i) {
    if (!(c.prevalence_grid[i] > 0.0)) throw InputError("diet_sweep: prevalences must be > 0");
    if (i > 0 && !(c.prevalence_grid[i] > c.prevalence_grid[i - 1]))
      throw InputError("diet_sweep: prevalence grid must be strictly increasing");
  }
  if (!(c.items_per_unit_prevalence > 0.0)) throw InputError("diet_sweep: items_per_unit_prevalence must be > 0");
  if (!(c.item_encounter_rate > 0.0)) throw InputError("diet_sweep: item_encounter_rate must be > 0");
  if (!(c.rate_low >= 0.0 && c.rate_low < c.rate_high)) throw InputError("diet_sweep: need 0 <= rate_low < rate_high");
  if (!(c.removal_prob >= 0.0 && c.removal_prob <= 1.0)) throw InputError("diet_sweep: removal_prob outside [0,1]");
  if (!(c.handling_time > 0.0)) throw InputError("diet_sweep: handling_time must be > 0");
}

/// Draw a population of items for one prevalence level, choose the optimal
/// diet and apply removal to the ignored items.
[[nodiscard]] inline SweepPoint sweep_point(const DietSweepConfig& config, std::size_t grid_index) {
  const double prevalence = config.prevalence_grid.at(grid_index);
  StreamRng rng(config.seed, grid_index);
  SweepPoint point;
  point.prevalence = prevalence;

  const auto count = static_cast<std::size_t>(std::llround(config.items_per_unit_prevalence * prevalence));
  if (count == 0) return point;

  std::vector<InfoItem> items(count);
  for (auto& item : items) {
    const double r = rng.uniform(config.rate_low, config.rate_high);
    item = {config.item_encounter_rate, r * config.handling_time, config.handling_time};
  }
  const DietSolution diet = optimal_diet(items);

  std::vector<bool> in_diet(count, false);
  for (auto idx : diet.included) in_diet[idx] = true;
  for (std::size_t i = 0; i < count; ++i) {
    if (in_diet[i]) {
      point.consumed.push_back(items[i].profitability());
    } else if (rng.uniform() >= config.removal_prob) {
      point.survived_ignored.push_back(items[i].profitability());
    }
  }
  point.diet_rate = diet.rate;
  if (!point.consumed.empty())
    point.diet_min_profitability = *std::min_element(point.consumed.begin(), point.consumed.end());
  return point;
}

/// Grid points use independent random streams derived from (seed, index), so
/// the result does not depend on `threads`.
[[nodiscard]] inline std::vector<SweepPoint> diet_sweep(const DietSweepConfig& config,
                                                        std::size_t threads = 1) {
  validate(config);
  std::vector<SweepPoint> out(config.prevalence_grid.size());
  parallel_for(out.size(), threads, [&](std::size_t i) { out[i] = sweep_point(config, i); });
  return out;
}

struct FrontierGrid {
  std::vector<double> merged_rates;     // columns
  std::vector<double> mean_item_rates;  // rows
  double env_rate = 0.0;
  std::vector<std::vector<std::optional<double>>> min_size;  // [row][column]; nullopt = infeasible
};

struct FrontierConfig {
  std::vector<double> merged_rate_grid;
  std::vector<double> mean_item_rate_grid;
  double env_rate = 0.5;
};

/// Default grid: 25 log-spaced prevalences over [0.1, 1000] and item rates
/// spanning infeasible (<= env_rate) to effectively unbounded.
[[nodiscard]] inline FrontierConfig default_frontier_config() {
  FrontierConfig c;
  for (int i = 0; i <= 24; ++i) c.merged_rate_grid.push_back(std::pow(10.0, -1.0 + 4.0 * i / 24.0));
  c.mean_item_rate_grid = {0.25, 0.5, 0.75, 1, 2, 4, 8, 16, 32, 64, 1e9};
  return c;
}

[[nodiscard]] inline FrontierGrid viability_frontier(std::span<const double> merged_rate_grid,
                                                     std::span<const double> mean_item_rate_grid,
                                                     double env_rate) {
  if (!(env_rate > 0.0)) throw InputError("viability_frontier: env_rate must be > 0");
  for (double v : merged_rate_grid)
    if (!(v > 0.0)) throw InputError("viability_frontier: merged rates must be > 0");
  for (double v : mean_item_rate_grid)
    if (!(v > 0.0)) throw InputError("viability_frontier: mean item rates must be > 0");

  FrontierGrid g;
  g.merged_rates.assign(merged_rate_grid.begin(), merged_rate_grid.end());
  g.mean_item_rates.assign(mean_item_rate_grid.begin(), mean_item_rate_grid.end());
  g.env_rate = env_rate;
  for (double item_rate : g.mean_item_rates) {
    auto& row = g.min_size.emplace_back();
    for (double lambda : g.merged_rates) row.push_back(min_item_size(lambda, item_rate, env_rate));
  }
  return g;
}

[[nodiscard]] inline FrontierGrid viability_frontier(const FrontierConfig& c) {
  return viability_frontier(c.merged_rate_grid, c.mean_item_rate_grid, c.env_rate);
}

}  // namespace infoforage
