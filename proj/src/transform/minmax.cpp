#include <cmath>

#include "ortglab/error.hpp"
#include "ortglab/transform.hpp"

namespace ortglab {

MinMaxNormalizer::MinMaxNormalizer(std::vector<double> min, std::vector<double> max)
    : min_(std::move(min)), max_(std::move(max)) {
  if (min_.size() != max_.size() || min_.empty()) {
    throw ArgumentError("normalizer min/max dimension mismatch");
  }
  for (std::size_t j = 0; j < min_.size(); ++j) {
    if (!std::isfinite(min_[j]) || !std::isfinite(max_[j]) || max_[j] < min_[j]) {
      throw ArgumentError("normalizer bounds invalid in dimension " + std::to_string(j));
    }
  }
}

double MinMaxNormalizer::apply(std::size_t j, double x) const {
  if (degenerate(j)) return 0.0;
  return (x - min_[j]) / (max_[j] - min_[j]);
}

double MinMaxNormalizer::invert(std::size_t j, double u) const {
  if (degenerate(j)) return min_[j];
  return min_[j] + u * (max_[j] - min_[j]);
}

double MinMaxNormalizer::slope(std::size_t j) const {
  if (degenerate(j)) return 0.0;
  return 1.0 / (max_[j] - min_[j]);
}

Eigen::VectorXd MinMaxNormalizer::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd out(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) out[j] = apply(static_cast<std::size_t>(j), x[j]);
  return out;
}

Eigen::VectorXd MinMaxNormalizer::invert(const Eigen::VectorXd& u) const {
  Eigen::VectorXd out(u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) out[j] = invert(static_cast<std::size_t>(j), u[j]);
  return out;
}

MinMaxNormalizer fit_minmax(const Eigen::MatrixXd& samples) {
  if (samples.rows() == 0 || samples.cols() == 0) throw FitError("cannot fit normalizer on no samples");
  if (!samples.allFinite()) throw FitError("cannot fit normalizer on non-finite samples");
  std::vector<double> lo(static_cast<std::size_t>(samples.cols()));
  std::vector<double> hi(lo.size());
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    lo[static_cast<std::size_t>(j)] = samples.col(j).minCoeff();
    hi[static_cast<std::size_t>(j)] = samples.col(j).maxCoeff();
  }
  return MinMaxNormalizer(std::move(lo), std::move(hi));
}

}  // namespace ortglab
