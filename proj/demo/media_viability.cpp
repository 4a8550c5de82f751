// Short-form versus long-form platforms under one environment rate: which are
// worth visiting, and how small their items may get as prevalence rises.

#include <cstdio>
#include <vector>

#include "infoforage/foraging.hpp"

int main() {
  using namespace infoforage;
  const double env_rate = 1.0;

  // Books: rare encounters, large items. Feed: frequent encounters, tiny items.
  const std::vector<InfoItem> book_shelf = {{0.05, 400.0, 300.0}, {0.02, 250.0, 240.0}};
  const std::vector<InfoItem> feed = {{30.0, 0.4, 0.1}, {20.0, 0.2, 0.08}, {50.0, 0.05, 0.05}};

  for (const auto& [name, items] : {std::pair{"books", book_shelf}, std::pair{"feed", feed}}) {
    const DietSolution diet = optimal_diet(items);
    const PlatformParams p = merge_platform(items, diet.included);
    std::printf("%-6s diet=%zu/%zu items  R=%.4f  r_m=%.3f  included=%s\n", name, diet.included.size(), items.size(),
                holling_rate(p), p.mean_item_rate(), platform_included(p, env_rate) ? "yes" : "no");
  }

  std::printf("\nminimum mean item size at r_m = 4, R_env = %.1f\n", env_rate);
  for (double lambda : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    const auto u = min_item_size(lambda, 4.0, env_rate);
    std::printf("  lambda_m = %-6g u_min = %g\n", lambda, u ? *u : -1.0);
  }
}
