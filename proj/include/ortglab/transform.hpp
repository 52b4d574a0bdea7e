#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ortglab/dataset.hpp"
#include "ortglab/features.hpp"

namespace ortglab {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Per-dimension affine map onto [0,1]. Zero-range dimensions are degenerate:
// they map to 0 and invert to the constant.
class MinMaxNormalizer {
 public:
  MinMaxNormalizer() = default;
  MinMaxNormalizer(std::vector<double> min, std::vector<double> max);

  std::size_t dims() const { return min_.size(); }
  const std::vector<double>& min() const { return min_; }
  const std::vector<double>& max() const { return max_; }
  bool degenerate(std::size_t j) const { return max_[j] == min_[j]; }
  double range(std::size_t j) const { return max_[j] - min_[j]; }

  double apply(std::size_t j, double x) const;
  double invert(std::size_t j, double u) const;
  // d apply / dx for dimension j (0 on degenerate dimensions).
  double slope(std::size_t j) const;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd invert(const Eigen::VectorXd& u) const;

 private:
  std::vector<double> min_;
  std::vector<double> max_;
};

// Rows of `samples` are observations.
MinMaxNormalizer fit_minmax(const Eigen::MatrixXd& samples);

struct PcaModel {
  Eigen::VectorXd mean;                // per-feature mean of the fitted inputs
  Eigen::VectorXd scale;               // per-feature sample std, 1 where the std is 0
  RowMatrix components;                // k x d, orthonormal rows
  Eigen::VectorXd explained_variance;  // k, nonincreasing
  std::vector<std::size_t> unit_scaled;

  std::size_t k() const { return static_cast<std::size_t>(components.rows()); }
  std::size_t dims() const { return static_cast<std::size_t>(components.cols()); }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  // Back-projection through the component transpose.
  Eigen::VectorXd invert(const Eigen::VectorXd& coords) const;
};

// Correlation-matrix PCA: inputs are centered and divided by their sample
// std, then the top-k right singular vectors are kept. Within each component
// the entry of largest magnitude is made nonnegative.
PcaModel fit_pca(const Eigen::MatrixXd& samples, std::size_t k);

inline constexpr std::size_t kDefaultComponents = 18;

// min-max normalization followed by PCA, plus the target normalizer.
struct TransformPipeline {
  MinMaxNormalizer feature_normalizer;  // 48-dim
  MinMaxNormalizer target_normalizer;   // 1-dim
  PcaModel pca;

  std::size_t k() const { return pca.k(); }

  Eigen::VectorXd forward(const FeatureVector& x) const;
  Eigen::VectorXd forward(const FeatureArray& x) const;
  // Pseudo-inverse: component transpose, then min-max inversion.
  FeatureArray inverse(const Eigen::VectorXd& coords) const;
  // Exact k x 48 Jacobian of forward (the map is affine).
  RowMatrix jacobian() const;

  double normalize_target(double ortg) const { return target_normalizer.apply(0, ortg); }
  double denormalize_target(double t) const { return target_normalizer.invert(0, t); }
  double target_range() const { return target_normalizer.range(0); }
};

TransformPipeline fit_pipeline(const Eigen::MatrixXd& features, const Eigen::VectorXd& ortg,
                               std::size_t k);
TransformPipeline fit_pipeline(const Dataset& data, std::size_t k);

Eigen::MatrixXd feature_matrix(const Dataset& data);
Eigen::VectorXd ortg_vector(const Dataset& data);

}  // namespace ortglab
