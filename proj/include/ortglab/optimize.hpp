#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ortglab/dataset.hpp"
#include "ortglab/features.hpp"
#include "ortglab/model.hpp"

namespace ortglab {

// Per-feature box intersected with a cap on the sum of the eight Freq
// features.
struct FeasibleRegion {
  FeatureArray lower{};
  FeatureArray upper{};
  double freq_sum_cap = 1.0;

  void validate() const;
  bool contains(const FeatureArray& x, double tol = 1e-9) const;
};

// Observed per-feature extrema widened by margin * range and clipped to
// [0,1]; the cap is the largest observed Freq sum, widened likewise.
FeasibleRegion derive_feasible_region(const Dataset& data, double margin = 0.0);

std::uint64_t region_fingerprint(const FeasibleRegion& region);

// Exact Euclidean projection onto the region. Non-frequency coordinates are
// clamped; the frequency block solves the KKT condition
// sum clamp(x - lambda, lower, upper) = cap for the multiplier.
FeatureArray project_feasible(const FeatureArray& x, const FeasibleRegion& region);

struct Objective {
  std::function<double(const FeatureArray&)> value;
  std::function<FeatureArray(const FeatureArray&)> gradient;
};

Objective predictor_objective(const TrainedPredictor& p);

// Feature index -> locked value.
using LockMap = std::map<std::size_t, double>;

// Parses "iso_freq=0.05".
std::pair<std::size_t, double> parse_lock(std::string_view text);

struct OptimizeConfig {
  std::uint64_t seed = 0;
  std::size_t restarts = 16;
  double step = 1e-2;
  std::size_t max_iters = 500;
  double tol = 1e-7;
  std::size_t threads = 1;
};

struct GameplanCandidate {
  FeatureVector features;
  double predicted_ortg = 0.0;
  std::vector<std::string> active_constraints;  // feature names and/or "freq_sum"
  LockMap locked;
  std::uint64_t region_fingerprint = 0;
};

// Throws ArgumentError when a lock falls outside the region or leaves the
// frequency cap unsatisfiable.
FeasibleRegion apply_locks(const FeasibleRegion& region, const LockMap& locked);

// Multi-start projected gradient ascent. Starts are the highest-ORTG rows of
// `starts` (if given) followed by uniform random points of the locked box.
// Every iterate is projected; a step that lowers the objective is halved
// until it does not.
GameplanCandidate optimize_gameplan(const Objective& objective, const FeasibleRegion& region, const LockMap& locked,
                                    const OptimizeConfig& cfg, const Dataset* starts = nullptr);
GameplanCandidate optimize_gameplan(const TrainedPredictor& p, const FeasibleRegion& region, const LockMap& locked,
                                    const OptimizeConfig& cfg, const Dataset* starts = nullptr);

struct SensitivityEntry {
  std::size_t feature = 0;
  double mean_gradient = 0.0;  // d ORTG / d feature, averaged over rows
  double feature_std = 0.0;    // sample std over rows
  double score = 0.0;          // mean_gradient * feature_std
};

struct SensitivityReport {
  std::vector<SensitivityEntry> ranking;  // descending score, ties by name
};

SensitivityReport sensitivity_rank(const TrainedPredictor& p, const Dataset& data);

enum class BandVerdict { below, within, above };
std::string_view verdict_name(BandVerdict v);

struct HypothesisCheck {
  std::string id;    // "i" .. "iv"
  std::string name;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  BandVerdict verdict = BandVerdict::within;
};

struct HypothesisReport {
  std::array<HypothesisCheck, 4> checks;
  std::size_t within = 0;
};

namespace bands {
inline constexpr double kIsoFreqLo = 0.20, kIsoFreqHi = 0.25;
inline constexpr double kSpotupFreqLo = 0.25, kSpotupFreqHi = 0.28;
inline constexpr double kSpotupFgMin = 0.40, kSpotupFgTarget = 0.42;
inline constexpr double kTransFreqLo = 0.17, kTransFreqHi = 0.20;
inline constexpr double kPnrFreqLo = 0.13, kPnrFreqHi = 0.17;
}  // namespace bands

HypothesisReport hypothesis_check(const FeatureVector& features);

std::string gameplan_json(const GameplanCandidate& g);
std::string sensitivity_json(const SensitivityReport& r);
std::string sensitivity_csv(const SensitivityReport& r);

}  // namespace ortglab
