#include "ortglab/synthetic.hpp"

#include <array>
#include <cmath>
#include <string>

#include "ortglab/common.hpp"
#include "ortglab/error.hpp"
#include "ortglab/transform.hpp"

namespace ortglab {

namespace {

constexpr std::array<const char*, 30> kTeams{
    "ATL", "BKN", "BOS", "CHA", "CHI", "CLE", "DAL", "DEN", "DET", "GSW",
    "HOU", "IND", "LAC", "LAL", "MEM", "MIA", "MIL", "MIN", "NOP", "NYK",
    "OKC", "ORL", "PHI", "PHX", "POR", "SAC", "SAS", "TOR", "UTA", "WAS"};

std::string season_label(std::size_t index) {
  const std::size_t start = 2015 + index;
  const std::size_t end = (start + 1) % 100;
  return std::to_string(start) + "-" + (end < 10 ? "0" : "") + std::to_string(end);
}

bool valid_range(const SampleRange& r) {
  return std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo >= 0.0 && r.hi <= 1.0 && r.lo <= r.hi;
}

void set_row(std::array<SampleRange, kFeatureCount>& ranges, FeatureArray& weights, Playtype p,
             SampleRange freq, SampleRange fg, double w_freq, double w_fg, double w_tov) {
  auto idx = [p](Metric m) { return FeatureKey{p, m}.index(); };
  ranges[idx(Metric::freq)] = freq;
  ranges[idx(Metric::fg_pct)] = fg;
  ranges[idx(Metric::ft_freq)] = {0.05, 0.18};
  ranges[idx(Metric::tov_freq)] = {0.04, 0.18};
  ranges[idx(Metric::and_one_freq)] = {0.01, 0.04};
  ranges[idx(Metric::score_freq)] = {0.38, 0.58};
  weights[idx(Metric::freq)] = w_freq;
  weights[idx(Metric::fg_pct)] = w_fg;
  weights[idx(Metric::ft_freq)] = 10.0;
  weights[idx(Metric::tov_freq)] = w_tov;
  weights[idx(Metric::and_one_freq)] = 20.0;
  weights[idx(Metric::score_freq)] = 25.0;
}

}  // namespace

SyntheticSpec SyntheticSpec::defaults() {
  SyntheticSpec s;
  auto& r = s.feature_ranges;
  auto& w = s.planted_weights;
  set_row(r, w, Playtype::isolation, {0.04, 0.12}, {0.36, 0.46}, 20.0, 30.0, -60.0);
  set_row(r, w, Playtype::transition, {0.12, 0.20}, {0.50, 0.60}, 25.0, 15.0, -40.0);
  set_row(r, w, Playtype::pnr_ball_handler, {0.13, 0.22}, {0.38, 0.46}, 5.0, 30.0, -60.0);
  set_row(r, w, Playtype::pnr_roll_man, {0.05, 0.10}, {0.52, 0.64}, 5.0, 15.0, -40.0);
  set_row(r, w, Playtype::post_up, {0.02, 0.09}, {0.42, 0.52}, -10.0, 15.0, -60.0);
  set_row(r, w, Playtype::spot_up, {0.20, 0.28}, {0.36, 0.44}, 20.0, 40.0, -40.0);
  set_row(r, w, Playtype::cut, {0.06, 0.11}, {0.58, 0.68}, 10.0, 15.0, -40.0);
  set_row(r, w, Playtype::off_screen, {0.03, 0.09}, {0.38, 0.48}, 5.0, 15.0, -40.0);
  return s;
}

double GroundTruth::rule(const FeatureVector& x) const {
  double acc = 0.0;
  for (std::size_t j = 0; j < kFeatureCount; ++j) acc += weights[j] * x[j];
  return bias + acc;
}

SyntheticDataset generate_synthetic_dataset(std::uint64_t seed, std::size_t n, const SyntheticSpec& spec) {
  if (n < 2) throw ArgumentError("synthetic dataset needs at least 2 rows");
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    if (!valid_range(spec.feature_ranges[j])) {
      throw ArgumentError("sampling range for " + feature_names()[j] + " is outside [0,1]");
    }
    if (!std::isfinite(spec.planted_weights[j])) throw ArgumentError("planted weights must be finite");
  }
  if (!valid_range(spec.freq_sum) || spec.freq_sum.lo <= 0.0) {
    throw ArgumentError("frequency-sum range must lie in (0,1]");
  }
  for (Playtype p : kPlaytypes) {
    if (spec.feature_ranges[freq_index(p)].hi <= 0.0) {
      throw ArgumentError("frequency draw range for " + std::string(playtype_code(p)) + " must be positive");
    }
  }
  if (!(spec.noise_sigma >= 0.0) || !(spec.signal_std >= 0.0) || !std::isfinite(spec.ortg_mean)) {
    throw ArgumentError("noise and signal levels must be nonnegative");
  }

  SyntheticDataset out;
  out.data.rows.resize(n);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = out.data.rows[i];
    row.season = season_label(i / kTeams.size());
    row.team = kTeams[i % kTeams.size()];
    std::array<double, kPlaytypeCount> draws{};
    double total = 0.0;
    for (std::size_t p = 0; p < kPlaytypeCount; ++p) {
      const auto& range = spec.feature_ranges[freq_index(kPlaytypes[p])];
      double v = rng.uniform(range.lo, range.hi);
      if (v <= 0.0) v = range.hi * 0x1.0p-20;
      draws[p] = v;
      total += v;
    }
    const double freq_sum = rng.uniform(spec.freq_sum.lo, spec.freq_sum.hi);
    for (std::size_t p = 0; p < kPlaytypeCount; ++p) {
      row.features[freq_index(kPlaytypes[p])] = draws[p] / total * freq_sum;
    }
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      if (FeatureKey::from_index(j).metric == Metric::freq) continue;
      const auto& range = spec.feature_ranges[j];
      row.features[j] = rng.uniform(range.lo, range.hi);
    }
  }

  Eigen::VectorXd w(static_cast<Eigen::Index>(kFeatureCount));
  for (std::size_t j = 0; j < kFeatureCount; ++j) w[static_cast<Eigen::Index>(j)] = spec.planted_weights[j];

  const Eigen::MatrixXd x = feature_matrix(out.data);
  if (spec.rule_rank > 0 && spec.rule_rank < kFeatureCount) {
    if (spec.rule_rank >= n) throw ArgumentError("rule rank must be below the row count");
    const auto pipeline = fit_pipeline(x, Eigen::VectorXd::Zero(x.rows()), spec.rule_rank);
    const Eigen::MatrixXd jac = pipeline.jacobian();
    // w <- J^T (J J^T)^-1 J w, the orthogonal projection onto row space of J.
    const Eigen::VectorXd coeffs = (jac * jac.transpose()).ldlt().solve(jac * w);
    w = jac.transpose() * coeffs;
  }

  Eigen::VectorXd signal = x * w;
  if (spec.signal_std > 0.0) {
    const double mean = signal.mean();
    const double sd = std::sqrt((signal.array() - mean).square().sum() / static_cast<double>(n - 1));
    if (sd > 0.0) w *= spec.signal_std / sd;
  }

  auto& truth = out.truth;
  for (std::size_t j = 0; j < kFeatureCount; ++j) truth.weights[j] = w[static_cast<Eigen::Index>(j)];
  truth.noise_sigma = spec.noise_sigma;
  truth.rule_rank = spec.rule_rank;
  double mean_signal = 0.0;
  for (const auto& row : out.data.rows) mean_signal += truth.rule(row.features);
  truth.bias = spec.ortg_mean - mean_signal / static_cast<double>(n);

  Rng noise(splitmix64(seed) ^ 0x6e6f697365ull);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = out.data.rows[i];
    row.ortg = truth.rule(row.features);
    if (spec.noise_sigma > 0.0) row.ortg += spec.noise_sigma * noise.normal();
    if (!(row.ortg > 0.0)) throw ArgumentError("synthetic rule produced a non-positive ORTG");
  }
  return out;
}

}  // namespace ortglab
