#include <algorithm>
#include <cmath>
#include <numeric>

#include "ortglab/common.hpp"
#include "ortglab/error.hpp"
#include "ortglab/optimize.hpp"

namespace ortglab {

Objective predictor_objective(const TrainedPredictor& p) {
  return {[&p](const FeatureArray& x) { return p.predict(x); },
          [&p](const FeatureArray& x) { return p.gradient(x); }};
}

namespace {

constexpr std::size_t kMaxHalvings = 40;
constexpr double kActiveTol = 1e-9;

struct AscentResult {
  FeatureArray x{};
  double value = 0.0;
};

AscentResult ascend(const Objective& objective, const FeasibleRegion& region, const FeatureArray& start,
                    const OptimizeConfig& cfg) {
  AscentResult cur;
  cur.x = project_feasible(start, region);
  cur.value = objective.value(cur.x);
  double alpha = cfg.step;
  for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
    const FeatureArray g = objective.gradient(cur.x);
    bool accepted = false;
    FeatureArray next{};
    double next_value = 0.0;
    for (std::size_t h = 0; h <= kMaxHalvings; ++h) {
      FeatureArray trial{};
      for (std::size_t j = 0; j < kFeatureCount; ++j) trial[j] = cur.x[j] + alpha * g[j];
      next = project_feasible(trial, region);
      next_value = objective.value(next);
      if (next_value >= cur.value) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    double movement = 0.0;
    for (std::size_t j = 0; j < kFeatureCount; ++j) movement = std::max(movement, std::abs(next[j] - cur.x[j]));
    cur.x = next;
    cur.value = next_value;
    if (movement <= cfg.tol) break;
  }
  return cur;
}

std::vector<FeatureArray> starting_points(const FeasibleRegion& region, const OptimizeConfig& cfg, const Dataset* rows) {
  std::vector<FeatureArray> starts;
  if (rows != nullptr && !rows->empty()) {
    std::vector<std::size_t> order(rows->size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rows->rows[a].ortg > rows->rows[b].ortg; });
    const std::size_t take = std::min(order.size(), (cfg.restarts + 1) / 2);
    for (std::size_t i = 0; i < take; ++i) starts.push_back(rows->rows[order[i]].features.values);
  }
  const std::uint64_t base = splitmix64(cfg.seed);
  for (std::size_t r = starts.size(); r < cfg.restarts; ++r) {
    Rng rng(derive_seed(base, r));
    FeatureArray x{};
    for (std::size_t j = 0; j < kFeatureCount; ++j) x[j] = rng.uniform(region.lower[j], region.upper[j]);
    starts.push_back(x);
  }
  return starts;
}

}  // namespace

GameplanCandidate optimize_gameplan(const Objective& objective, const FeasibleRegion& region, const LockMap& locked,
                                    const OptimizeConfig& cfg, const Dataset* starts) {
  region.validate();
  if (cfg.restarts == 0) throw ArgumentError("optimizer needs at least one restart");
  if (!(cfg.step > 0.0) || !(cfg.tol > 0.0)) throw ArgumentError("optimizer step and tolerance must be positive");
  const FeasibleRegion locked_region = apply_locks(region, locked);

  const auto points = starting_points(locked_region, cfg, starts);
  std::vector<AscentResult> results(points.size());
  parallel_for(points.size(), cfg.threads,
               [&](std::size_t r) { results[r] = ascend(objective, locked_region, points[r], cfg); });

  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r) {
    const auto& a = results[r];
    const auto& b = results[best];
    if (a.value > b.value || (a.value == b.value && a.x < b.x)) best = r;
  }

  GameplanCandidate out;
  out.features.values = results[best].x;
  for (const auto& [j, v] : locked) out.features[j] = v;
  out.predicted_ortg = objective.value(out.features.values);
  out.locked = locked;
  out.region_fingerprint = region_fingerprint(region);
  const auto& names = feature_names();
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    if (locked.contains(j)) continue;
    const double x = out.features[j];
    if (x - locked_region.lower[j] <= kActiveTol || locked_region.upper[j] - x <= kActiveTol) {
      out.active_constraints.push_back(names[j]);
    }
  }
  if (locked_region.freq_sum_cap - out.features.freq_sum() <= kActiveTol) out.active_constraints.push_back("freq_sum");
  return out;
}

GameplanCandidate optimize_gameplan(const TrainedPredictor& p, const FeasibleRegion& region, const LockMap& locked,
                                    const OptimizeConfig& cfg, const Dataset* starts) {
  return optimize_gameplan(predictor_objective(p), region, locked, cfg, starts);
}

}  // namespace ortglab
