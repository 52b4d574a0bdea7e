#include "ortglab/features.hpp"

#include <cmath>

namespace ortglab {

std::string_view playtype_code(Playtype p) {
  switch (p) {
    case Playtype::isolation: return "iso";
    case Playtype::transition: return "trans";
    case Playtype::pnr_ball_handler: return "prbh";
    case Playtype::pnr_roll_man: return "prrm";
    case Playtype::post_up: return "postup";
    case Playtype::spot_up: return "spotup";
    case Playtype::cut: return "cut";
    case Playtype::off_screen: return "offscr";
  }
  return "?";
}

std::string_view metric_code(Metric m) {
  switch (m) {
    case Metric::freq: return "freq";
    case Metric::fg_pct: return "fg_pct";
    case Metric::ft_freq: return "ft_freq";
    case Metric::tov_freq: return "tov_freq";
    case Metric::and_one_freq: return "and1_freq";
    case Metric::score_freq: return "score_freq";
  }
  return "?";
}

std::string FeatureKey::name() const {
  std::string out(playtype_code(playtype));
  out += '_';
  out += metric_code(metric);
  return out;
}

const std::array<std::string, kFeatureCount>& feature_names() {
  static const auto names = [] {
    std::array<std::string, kFeatureCount> out;
    for (std::size_t i = 0; i < kFeatureCount; ++i) out[i] = FeatureKey::from_index(i).name();
    return out;
  }();
  return names;
}

std::optional<std::size_t> feature_index(std::string_view name) {
  const auto& names = feature_names();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (names[i] == name) return i;
  }
  return std::nullopt;
}

double FeatureVector::freq_sum() const {
  double s = 0.0;
  for (Playtype p : kPlaytypes) s += values[freq_index(p)];
  return s;
}

std::optional<std::string> check_feature_vector(const FeatureVector& v) {
  const auto& names = feature_names();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    const double x = v.values[i];
    if (!std::isfinite(x)) return names[i] + " is not a finite number";
    if (x < 0.0 || x > 1.0) return names[i] + " = " + std::to_string(x) + " is outside [0,1]";
  }
  const double s = v.freq_sum();
  if (s > 1.0 + kFreqSumSlack) {
    return "frequency features sum to " + std::to_string(s) + ", above 1";
  }
  return std::nullopt;
}

}  // namespace ortglab
