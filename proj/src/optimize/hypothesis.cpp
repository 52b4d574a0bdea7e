#include "ortglab/optimize.hpp"

namespace ortglab {

std::string_view verdict_name(BandVerdict v) {
  switch (v) {
    case BandVerdict::below: return "below";
    case BandVerdict::within: return "within";
    case BandVerdict::above: return "above";
  }
  return "?";
}

namespace {

BandVerdict classify(double v, double lo, double hi) {
  if (v < lo) return BandVerdict::below;
  if (v > hi) return BandVerdict::above;
  return BandVerdict::within;
}

HypothesisCheck band(std::string id, std::string name, double value, double lo, double hi) {
  return {std::move(id), std::move(name), value, lo, hi, classify(value, lo, hi)};
}

}  // namespace

HypothesisReport hypothesis_check(const FeatureVector& f) {
  using namespace bands;
  const double iso = f[FeatureKey{Playtype::isolation, Metric::freq}];
  const double spot = f[FeatureKey{Playtype::spot_up, Metric::freq}];
  const double spot_fg = f[FeatureKey{Playtype::spot_up, Metric::fg_pct}];
  const double trans = f[FeatureKey{Playtype::transition, Metric::freq}];
  const double pnr = f[FeatureKey{Playtype::pnr_ball_handler, Metric::freq}] + f[FeatureKey{Playtype::pnr_roll_man, Metric::freq}];

  HypothesisReport r;
  r.checks[0] = band("i", "isolation_frequency", iso, kIsoFreqLo, kIsoFreqHi);
  // Spot-up needs both the frequency band and the field-goal floor.
  r.checks[1] = band("ii", "spotup_frequency_and_efficiency", spot, kSpotupFreqLo, kSpotupFreqHi);
  if (spot_fg < kSpotupFgMin) r.checks[1].verdict = BandVerdict::below;
  r.checks[2] = band("iii", "transition_frequency", trans, kTransFreqLo, kTransFreqHi);
  r.checks[3] = band("iv", "pick_and_roll_frequency", pnr, kPnrFreqLo, kPnrFreqHi);
  for (const auto& c : r.checks) r.within += c.verdict == BandVerdict::within ? 1 : 0;
  return r;
}

}  // namespace ortglab
