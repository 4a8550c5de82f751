#pragma once

// Patches with diminishing returns: residence times by the marginal value
// theorem and greedy patch selection ("patches as prey").

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <variant>
#include <vector>

#include "infoforage/errors.hpp"

namespace infoforage {

/// g(t) = total_utility * (1 - exp(-t / timescale))
struct ExponentialSaturating {
  double total_utility = 1.0;
  double timescale = 1.0;
};

/// g(t) = coefficient * t^exponent, exponent in (0, 1)
struct PowerDiminishing {
  double coefficient = 1.0;
  double exponent = 0.5;
};

using GainFunction = std::variant<ExponentialSaturating, PowerDiminishing>;

struct PatchType {
  double encounter_rate = 0.0;
  GainFunction gain = ExponentialSaturating{};
};

struct ResidenceSolution {
  std::vector<double> residence_times;  // 0 means the patch is ignored
  double env_rate = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

struct MvtOptions {
  double damping = 0.5;
  double rate_tolerance = 1e-9;
  std::size_t max_iterations = 1000;
};

namespace detail {
template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;
}  // namespace detail

inline void validate(const GainFunction& g) {
  std::visit(detail::overloaded{
                 [](const ExponentialSaturating& e) {
                   if (!(e.total_utility >= 0.0) || !std::isfinite(e.total_utility))
                     throw InputError("ExponentialSaturating: total_utility must be finite and >= 0");
                   if (!(e.timescale > 0.0) || !std::isfinite(e.timescale))
                     throw InputError("ExponentialSaturating: timescale must be finite and > 0");
                 },
                 [](const PowerDiminishing& p) {
                   if (!(p.coefficient > 0.0) || !std::isfinite(p.coefficient))
                     throw InputError("PowerDiminishing: coefficient must be finite and > 0");
                   if (!(p.exponent > 0.0 && p.exponent < 1.0))
                     throw InputError("PowerDiminishing: exponent must lie in (0, 1)");
                 }},
             g);
}

inline void validate(const PatchType& p) {
  if (!(p.encounter_rate >= 0.0) || !std::isfinite(p.encounter_rate))
    throw InputError("PatchType: encounter_rate must be finite and >= 0");
  validate(p.gain);
}

[[nodiscard]] inline double gain(const GainFunction& g, double t) {
  return std::visit(
      detail::overloaded{
          [t](const ExponentialSaturating& e) { return -e.total_utility * std::expm1(-t / e.timescale); },
          [t](const PowerDiminishing& p) { return p.coefficient * std::pow(t, p.exponent); }},
      g);
}

[[nodiscard]] inline double marginal_gain(const GainFunction& g, double t) {
  return std::visit(
      detail::overloaded{
          [t](const ExponentialSaturating& e) {
            return e.total_utility / e.timescale * std::exp(-t / e.timescale);
          },
          [t](const PowerDiminishing& p) {
            return p.coefficient * p.exponent * std::pow(t, p.exponent - 1.0);
          }},
      g);
}

/// g'(0+); +inf for the power family.
[[nodiscard]] inline double initial_marginal_gain(const GainFunction& g) {
  return std::visit(detail::overloaded{
                        [](const ExponentialSaturating& e) { return e.total_utility / e.timescale; },
                        [](const PowerDiminishing&) { return std::numeric_limits<double>::infinity(); }},
                    g);
}

/// Residence time t with g'(t) = rate, or 0 when g'(0+) <= rate.
[[nodiscard]] inline double inverse_marginal_gain(const GainFunction& g, double rate) {
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  if (initial_marginal_gain(g) <= rate) return 0.0;
  return std::visit(detail::overloaded{
                        [rate](const ExponentialSaturating& e) {
                          return e.timescale * std::log(e.total_utility / (e.timescale * rate));
                        },
                        [rate](const PowerDiminishing& p) {
                          return std::pow(rate / (p.coefficient * p.exponent), 1.0 / (p.exponent - 1.0));
                        }},
                    g);
}

/// sup over t > 0 of g(t)/t. Both families are concave with g(0) = 0, so the
/// average rate is largest as t -> 0+ and equals g'(0+).
[[nodiscard]] inline double max_profitability(const GainFunction& g) { return initial_marginal_gain(g); }

/// Overall rate of spending residence_times[k] in each encountered patch k.
[[nodiscard]] inline double environment_rate(std::span<const PatchType> patches,
                                             std::span<const double> residence_times) {
  if (patches.size() != residence_times.size())
    throw InputError("environment_rate: residence vector length differs from patch count");
  double gained = 0.0;
  double spent = 0.0;
  for (std::size_t k = 0; k < patches.size(); ++k) {
    const double t = residence_times[k];
    if (!(t >= 0.0)) throw InputError("environment_rate: residence times must be >= 0");
    if (t == 0.0) continue;
    gained += patches[k].encounter_rate * gain(patches[k].gain, t);
    spent += patches[k].encounter_rate * t;
  }
  return gained / (1.0 + spent);
}

/// Damped fixed-point iteration on the environment rate R: each patch's
/// residence time solves g'(t) = R (or is 0 when g'(0+) <= R), then R moves
/// halfway towards the rate those residence times achieve. A result with
/// converged == false carries the last iterate.
[[nodiscard]] inline ResidenceSolution mvt_solve(std::span<const PatchType> patches,
                                                 const MvtOptions& opts = {}) {
  if (patches.empty()) throw InputError("mvt_solve: no patches");
  for (const auto& p : patches) validate(p);

  const std::size_t n = patches.size();
  ResidenceSolution out;
  out.residence_times.assign(n, 0.0);

  // Start from the best single patch with unit residence time.
  double rate = 0.0;
  for (const auto& p : patches)
    rate = std::max(rate, p.encounter_rate * gain(p.gain, 1.0) / (1.0 + p.encounter_rate));
  if (!(rate > 0.0)) {
    out.converged = true;  // nothing worth visiting
    return out;
  }

  std::vector<double> times(n);
  auto solve_times = [&](double r) {
    for (std::size_t k = 0; k < n; ++k)
      times[k] = patches[k].encounter_rate > 0.0 ? inverse_marginal_gain(patches[k].gain, r) : 0.0;
  };

  for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
    solve_times(rate);
    const double achieved = environment_rate(patches, times);
    const double next = rate + opts.damping * (achieved - rate);
    out.iterations = it;
    const double step = std::abs(next - rate);
    rate = next;
    if (step < opts.rate_tolerance) {
      out.converged = true;
      break;
    }
  }

  solve_times(rate);
  out.residence_times = times;
  out.env_rate = environment_rate(patches, times);
  return out;
}

struct PatchSelection {
  std::vector<std::size_t> selected;  // ascending indices
  ResidenceSolution solution;         // indexed like the input; 0 for unselected patches
};

/// Add patches in decreasing max_profitability, re-solving residence times
/// after each addition. When a solve leaves some patch with zero residence
/// time, that patch is dropped and the loop ends: every patch still unranked
/// has an initial marginal gain no larger than the dropped one, so none of them
/// could be visited either. Patches with zero encounter rate are skipped.
[[nodiscard]] inline PatchSelection patches_as_prey(std::span<const PatchType> patches,
                                                    const MvtOptions& opts = {}) {
  if (patches.empty()) throw InputError("patches_as_prey: no patches");
  for (const auto& p : patches) validate(p);

  std::vector<std::size_t> order(patches.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return max_profitability(patches[a].gain) > max_profitability(patches[b].gain);
  });

  PatchSelection out;
  out.solution.residence_times.assign(patches.size(), 0.0);
  out.solution.converged = true;

  std::vector<std::size_t> chosen;
  std::vector<PatchType> subset;
  for (auto idx : order) {
    if (patches[idx].encounter_rate == 0.0) continue;  // never encountered
    chosen.push_back(idx);
    subset.push_back(patches[idx]);
    const ResidenceSolution trial = mvt_solve(subset, opts);
    if (!trial.converged) {
      out.solution.converged = false;
      out.solution.iterations = trial.iterations;
      chosen.pop_back();
      break;
    }
    const double slack = 1e-12 * std::max(1.0, out.solution.env_rate);
    if (trial.env_rate < out.solution.env_rate - slack) {
      chosen.pop_back();
      break;
    }

    out.solution.env_rate = trial.env_rate;
    out.solution.iterations = trial.iterations;
    std::fill(out.solution.residence_times.begin(), out.solution.residence_times.end(), 0.0);
    bool ejected = false;
    for (std::size_t k = 0; k < chosen.size(); ++k) {
      out.solution.residence_times[chosen[k]] = trial.residence_times[k];
      ejected = ejected || trial.residence_times[k] == 0.0;
    }
    if (ejected) {
      std::erase_if(chosen, [&](std::size_t i) { return out.solution.residence_times[i] == 0.0; });
      break;
    }
  }
  out.selected = chosen;
  std::sort(out.selected.begin(), out.selected.end());
  return out;
}

}  // namespace infoforage
