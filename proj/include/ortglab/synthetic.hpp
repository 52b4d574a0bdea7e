#pragma once

#include <cstddef>
#include <cstdint>

#include "ortglab/dataset.hpp"
#include "ortglab/features.hpp"

namespace ortglab {

struct SampleRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct SyntheticSpec {
  // Sampling range per feature. For the eight Freq features these bound the
  // raw positive draws that are then rescaled onto the frequency sum.
  std::array<SampleRange, kFeatureCount> feature_ranges{};
  SampleRange freq_sum{0.7, 0.95};
  // ORTG points per unit of each raw feature, before projection and rescale.
  FeatureArray planted_weights{};
  double ortg_mean = 110.0;
  // Std of the noiseless rule over the generated rows; 0 keeps the weights.
  double signal_std = 4.5;
  // Additive Gaussian noise, in ORTG points.
  double noise_sigma = 2.0;
  // When in (0, 48): the rule is projected onto the row space of the
  // pipeline (min-max + PCA with this many components) fitted on the
  // generated features, so a PCA-space linear model represents it exactly.
  std::size_t rule_rank = 18;

  static SyntheticSpec defaults();
};

struct GroundTruth {
  FeatureArray weights{};
  double bias = 0.0;
  double noise_sigma = 0.0;
  std::size_t rule_rank = 0;

  // bias + weights . x, summed in index order.
  double rule(const FeatureVector& x) const;
};

struct SyntheticDataset {
  Dataset data;
  GroundTruth truth;
};

SyntheticDataset generate_synthetic_dataset(std::uint64_t seed, std::size_t n,
                                            const SyntheticSpec& spec = SyntheticSpec::defaults());

}  // namespace ortglab
