#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace ortglab {

// The eight modeled Synergy playtypes, in canonical order. Putbacks, Misc and
// Handoff are deliberately absent.
enum class Playtype : std::size_t {
  isolation,
  transition,
  pnr_ball_handler,
  pnr_roll_man,
  post_up,
  spot_up,
  cut,
  off_screen,
};

enum class Metric : std::size_t {
  freq,
  fg_pct,
  ft_freq,
  tov_freq,
  and_one_freq,
  score_freq,
};

inline constexpr std::size_t kPlaytypeCount = 8;
inline constexpr std::size_t kMetricCount = 6;
inline constexpr std::size_t kFeatureCount = kPlaytypeCount * kMetricCount;

inline constexpr std::array<Playtype, kPlaytypeCount> kPlaytypes{
    Playtype::isolation, Playtype::transition, Playtype::pnr_ball_handler,
    Playtype::pnr_roll_man, Playtype::post_up, Playtype::spot_up,
    Playtype::cut, Playtype::off_screen};

inline constexpr std::array<Metric, kMetricCount> kMetrics{
    Metric::freq, Metric::fg_pct, Metric::ft_freq,
    Metric::tov_freq, Metric::and_one_freq, Metric::score_freq};

std::string_view playtype_code(Playtype p);
std::string_view metric_code(Metric m);

struct FeatureKey {
  Playtype playtype;
  Metric metric;

  constexpr std::size_t index() const {
    return static_cast<std::size_t>(playtype) * kMetricCount + static_cast<std::size_t>(metric);
  }
  static constexpr FeatureKey from_index(std::size_t i) {
    return {static_cast<Playtype>(i / kMetricCount), static_cast<Metric>(i % kMetricCount)};
  }
  std::string name() const;

  friend constexpr bool operator==(FeatureKey, FeatureKey) = default;
};

constexpr std::size_t freq_index(Playtype p) { return FeatureKey{p, Metric::freq}.index(); }

// All 48 canonical names, e.g. "iso_freq", "spotup_fg_pct", in index order.
const std::array<std::string, kFeatureCount>& feature_names();
std::optional<std::size_t> feature_index(std::string_view name);

using FeatureArray = std::array<double, kFeatureCount>;

// A team-season playtype profile. Values are fractions (0.225 == 22.5%).
struct FeatureVector {
  FeatureArray values{};

  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](FeatureKey k) const { return values[k.index()]; }
  double& operator[](FeatureKey k) { return values[k.index()]; }

  double freq_sum() const;
};

// Tolerance on the sum of the eight frequency features.
inline constexpr double kFreqSumSlack = 1e-9;

// Empty when valid, otherwise a description of the first violation.
std::optional<std::string> check_feature_vector(const FeatureVector& v);

}  // namespace ortglab
