#include <cmath>

#include "ortglab/error.hpp"
#include "ortglab/transform.hpp"

namespace ortglab {

Eigen::VectorXd TransformPipeline::forward(const FeatureArray& x) const {
  Eigen::VectorXd raw(static_cast<Eigen::Index>(kFeatureCount));
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    if (!std::isfinite(x[j])) throw ArgumentError("non-finite feature " + feature_names()[j]);
    raw[static_cast<Eigen::Index>(j)] = x[j];
  }
  return pca.apply(feature_normalizer.apply(raw));
}

Eigen::VectorXd TransformPipeline::forward(const FeatureVector& x) const { return forward(x.values); }

FeatureArray TransformPipeline::inverse(const Eigen::VectorXd& coords) const {
  const Eigen::VectorXd raw = feature_normalizer.invert(pca.invert(coords));
  FeatureArray out{};
  for (std::size_t j = 0; j < kFeatureCount; ++j) out[j] = raw[static_cast<Eigen::Index>(j)];
  return out;
}

RowMatrix TransformPipeline::jacobian() const {
  RowMatrix j = pca.components;
  for (Eigen::Index c = 0; c < j.cols(); ++c) {
    j.col(c) *= feature_normalizer.slope(static_cast<std::size_t>(c)) / pca.scale[c];
  }
  return j;
}

TransformPipeline fit_pipeline(const Eigen::MatrixXd& features, const Eigen::VectorXd& ortg,
                               std::size_t k) {
  if (features.cols() != static_cast<Eigen::Index>(kFeatureCount)) {
    throw FitError("pipeline expects " + std::to_string(kFeatureCount) + " features");
  }
  if (features.rows() != ortg.size()) throw FitError("feature/target row count mismatch");
  TransformPipeline p;
  p.feature_normalizer = fit_minmax(features);
  p.target_normalizer = fit_minmax(ortg);
  Eigen::MatrixXd scaled(features.rows(), features.cols());
  for (Eigen::Index r = 0; r < features.rows(); ++r) {
    scaled.row(r) = p.feature_normalizer.apply(Eigen::VectorXd(features.row(r).transpose())).transpose();
  }
  p.pca = fit_pca(scaled, k);
  return p;
}

TransformPipeline fit_pipeline(const Dataset& data, std::size_t k) {
  return fit_pipeline(feature_matrix(data), ortg_vector(data), k);
}

Eigen::MatrixXd feature_matrix(const Dataset& data) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(kFeatureCount));
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = data.rows[i].features[j];
    }
  }
  return m;
}

Eigen::VectorXd ortg_vector(const Dataset& data) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) v[static_cast<Eigen::Index>(i)] = data.rows[i].ortg;
  return v;
}

}  // namespace ortglab
