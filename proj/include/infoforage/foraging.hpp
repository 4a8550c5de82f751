#pragma once

// Information diet choice: expected utility rates of item diets, the greedy
// optimal-diet rule, and the merged-platform (Holling) description used for
// media platform inclusion.
//
// Utility and time are unit-agnostic. Rescaling every (utility, handling time)
// pair and the inverse encounter rates by a common factor rescales every rate
// returned here by the same factor and leaves every diet choice unchanged.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infoforage/errors.hpp"

namespace infoforage {

/// One information type: encountered at `encounter_rate` per unit search time,
/// yielding `utility` after `handling_time` of consumption.
struct InfoItem {
  double encounter_rate = 0.0;
  double utility = 0.0;
  double handling_time = 1.0;

  [[nodiscard]] double profitability() const noexcept { return utility / handling_time; }
};

/// Indices into an item list. Order is irrelevant to every rate computed here.
using Diet = std::vector<std::size_t>;

struct ThresholdStep {
  std::size_t index = 0;
  double rate_before = 0.0;  // diet rate before this item was considered
};

struct DietSolution {
  Diet included;                            // ascending indices
  double rate = 0.0;                        // diet_rate(items, included)
  std::vector<ThresholdStep> threshold_trace;  // greedy steps in ranking order
};

/// Merged Poisson description of a platform: total encounter rate and
/// encounter-weighted mean utility and handling time.
struct PlatformParams {
  double merged_rate = 0.0;
  double mean_utility = 0.0;
  double mean_handling = 1.0;

  [[nodiscard]] double mean_item_rate() const noexcept { return mean_utility / mean_handling; }
};

inline void validate(const InfoItem& item) {
  if (!(item.encounter_rate >= 0.0) || !std::isfinite(item.encounter_rate))
    throw InputError("InfoItem: encounter_rate must be finite and >= 0");
  if (!(item.utility >= 0.0) || !std::isfinite(item.utility))
    throw InputError("InfoItem: utility must be finite and >= 0");
  if (!(item.handling_time > 0.0) || !std::isfinite(item.handling_time))
    throw InputError("InfoItem: handling_time must be finite and > 0");
  if (!std::isfinite(item.profitability()))
    throw InputError("InfoItem: profitability utility/handling_time is not finite");
}

inline void validate(std::span<const InfoItem> items) {
  for (const auto& item : items) validate(item);
}

inline void validate(const PlatformParams& p) {
  if (!(p.merged_rate >= 0.0) || !std::isfinite(p.merged_rate))
    throw InputError("PlatformParams: merged_rate must be finite and >= 0");
  if (!(p.mean_utility >= 0.0) || !std::isfinite(p.mean_utility))
    throw InputError("PlatformParams: mean_utility must be finite and >= 0");
  if (!(p.mean_handling > 0.0) || !std::isfinite(p.mean_handling))
    throw InputError("PlatformParams: mean_handling must be finite and > 0");
  if (!std::isfinite(p.mean_item_rate()))
    throw InputError("PlatformParams: mean item rate is not finite");
}

namespace detail {

inline void check_diet(std::size_t n_items, std::span<const std::size_t> diet) {
  std::vector<bool> seen(n_items, false);
  for (auto idx : diet) {
    if (idx >= n_items)
      throw InputError("diet index " + std::to_string(idx) + " out of range for " +
                       std::to_string(n_items) + " items");
    if (seen[idx]) throw InputError("diet index " + std::to_string(idx) + " repeated");
    seen[idx] = true;
  }
}

}  // namespace detail

/// Expected utility rate of always consuming the items in `diet` on encounter
/// and ignoring everything else. The empty diet has rate 0.
[[nodiscard]] inline double diet_rate(std::span<const InfoItem> items,
                                      std::span<const std::size_t> diet) {
  detail::check_diet(items.size(), diet);
  double gain = 0.0;
  double handling = 0.0;
  for (auto idx : diet) {
    const auto& it = items[idx];
    gain += it.encounter_rate * it.utility;
    handling += it.encounter_rate * it.handling_time;
  }
  return gain / (1.0 + handling);
}

/// Rate when item i is consumed with probability probabilities[i] on encounter.
[[nodiscard]] inline double generalized_rate(std::span<const InfoItem> items,
                                             std::span<const double> probabilities) {
  if (probabilities.size() != items.size())
    throw InputError("generalized_rate: probability vector length differs from item count");
  double gain = 0.0;
  double handling = 0.0;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const double p = probabilities[i];
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("generalized_rate: probability outside [0,1]");
    gain += p * items[i].encounter_rate * items[i].utility;
    handling += p * items[i].encounter_rate * items[i].handling_time;
  }
  return gain / (1.0 + handling);
}

/// Rate-maximizing diet by the ranking rule: take items in decreasing
/// profitability and include each while its profitability is at least the rate
/// of the items already taken. Equal profitabilities keep input order.
/// Zero-utility items are never taken since they cannot raise the rate.
[[nodiscard]] inline DietSolution optimal_diet(std::span<const InfoItem> items) {
  if (items.empty()) throw InputError("optimal_diet: empty item list");
  validate(items);

  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return items[a].profitability() > items[b].profitability();
  });

  DietSolution out;
  double gain = 0.0;
  double handling = 0.0;
  for (auto idx : order) {
    const auto& it = items[idx];
    const double current = gain / (1.0 + handling);
    if (it.utility <= 0.0) break;  // everything after ranks at r = 0 too
    out.threshold_trace.push_back({idx, current});
    if (it.profitability() < current) break;
    out.included.push_back(idx);
    gain += it.encounter_rate * it.utility;
    handling += it.encounter_rate * it.handling_time;
  }
  std::sort(out.included.begin(), out.included.end());
  out.rate = diet_rate(items, out.included);
  return out;
}

/// Analytic derivative of the diet rate with respect to the encounter rate of
/// diet member `index`.
[[nodiscard]] inline double rate_gradient_wrt_prevalence(std::span<const InfoItem> items,
                                                         std::span<const std::size_t> diet,
                                                         std::size_t index) {
  detail::check_diet(items.size(), diet);
  if (std::find(diet.begin(), diet.end(), index) == diet.end())
    throw InputError("rate_gradient_wrt_prevalence: index " + std::to_string(index) +
                     " is not in the diet");
  double gain = 0.0;
  double handling = 0.0;
  for (auto idx : diet) {
    gain += items[idx].encounter_rate * items[idx].utility;
    handling += items[idx].encounter_rate * items[idx].handling_time;
  }
  const double denom = 1.0 + handling;
  const auto& it = items[index];
  return (it.utility * denom - it.handling_time * gain) / (denom * denom);
}

/// Collapse a diet's independent encounter processes into one merged process.
[[nodiscard]] inline PlatformParams merge_platform(std::span<const InfoItem> items,
                                                   std::span<const std::size_t> diet) {
  detail::check_diet(items.size(), diet);
  if (diet.empty()) throw InputError("merge_platform: empty diet has no mean item");
  double rate = 0.0;
  double gain = 0.0;
  double handling = 0.0;
  for (auto idx : diet) {
    rate += items[idx].encounter_rate;
    gain += items[idx].encounter_rate * items[idx].utility;
    handling += items[idx].encounter_rate * items[idx].handling_time;
  }
  if (!(rate > 0.0)) throw InputError("merge_platform: diet has zero total encounter rate");
  return {rate, gain / rate, handling / rate};
}

/// Holling disc equation on merged platform parameters.
[[nodiscard]] inline double holling_rate(const PlatformParams& p) {
  validate(p);
  return p.merged_rate * p.mean_utility / (1.0 + p.merged_rate * p.mean_handling);
}

/// Platform inclusion test in its (prevalence, item size, item rate) form:
/// 1/(lambda*u) + 1/r <= 1/env_rate. Equality counts as included.
[[nodiscard]] inline bool platform_included(double merged_rate, double mean_utility,
                                            double mean_item_rate, double env_rate) {
  if (!(env_rate > 0.0)) throw InputError("platform_included: env_rate must be > 0");
  if (!(merged_rate >= 0.0) || !(mean_utility >= 0.0) || !(mean_item_rate >= 0.0))
    throw InputError("platform_included: platform parameters must be >= 0");
  const double size_term = 1.0 / (merged_rate * mean_utility);  // inf when either is 0
  const double rate_term = 1.0 / mean_item_rate;
  return size_term + rate_term <= 1.0 / env_rate;
}

[[nodiscard]] inline bool platform_included(const PlatformParams& p, double env_rate) {
  validate(p);
  return platform_included(p.merged_rate, p.mean_utility, p.mean_item_rate(), env_rate);
}

/// Smallest mean item utility for which a platform with the given prevalence
/// and item rate passes platform_included. nullopt when no size suffices
/// (mean_item_rate <= env_rate). The returned value is exact in floating
/// point: it passes the test and its next representable value below fails.
[[nodiscard]] inline std::optional<double> min_item_size(double merged_rate,
                                                         double mean_item_rate,
                                                         double env_rate) {
  if (!(merged_rate > 0.0) || !(mean_item_rate > 0.0) || !(env_rate > 0.0))
    throw InputError("min_item_size: all arguments must be > 0");
  if (!std::isfinite(merged_rate) || !std::isfinite(env_rate))
    throw InputError("min_item_size: arguments must be finite");
  if (mean_item_rate <= env_rate) return std::nullopt;

  const double slack = 1.0 / env_rate - 1.0 / mean_item_rate;
  if (!(slack > 0.0)) return std::nullopt;
  double u = 1.0 / (merged_rate * slack);
  constexpr double inf = std::numeric_limits<double>::infinity();
  while (!platform_included(merged_rate, u, mean_item_rate, env_rate)) u = std::nextafter(u, inf);
  for (double below = std::nextafter(u, 0.0);
       below > 0.0 && platform_included(merged_rate, below, mean_item_rate, env_rate);
       below = std::nextafter(u, 0.0))
    u = below;
  return u;
}

}  // namespace infoforage
