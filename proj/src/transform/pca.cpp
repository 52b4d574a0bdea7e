#include <cmath>

#include "ortglab/error.hpp"
#include "ortglab/kernels.hpp"
#include "ortglab/transform.hpp"

namespace ortglab {

PcaModel fit_pca(const Eigen::MatrixXd& samples, std::size_t k) {
  const auto n = static_cast<std::size_t>(samples.rows());
  const auto d = static_cast<std::size_t>(samples.cols());
  if (k < 1 || k > d) {
    throw FitError("PCA component count " + std::to_string(k) + " outside [1, " + std::to_string(d) + "]");
  }
  if (k >= n) {
    throw FitError("PCA needs more samples than components (k=" + std::to_string(k) +
                   ", samples=" + std::to_string(n) + ")");
  }
  if (!samples.allFinite()) throw FitError("PCA input contains non-finite values");

  PcaModel model;
  model.mean = samples.colwise().mean().transpose();
  model.scale.resize(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < samples.cols(); ++j) {
    // Constant columns center to exact zeros.
    if (samples.col(j).minCoeff() == samples.col(j).maxCoeff()) model.mean[j] = samples(0, j);
  }
  Eigen::MatrixXd centered = samples.rowwise() - model.mean.transpose();
  for (std::size_t j = 0; j < d; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double var = centered.col(jj).squaredNorm() / static_cast<double>(n - 1);
    if (var > 0.0) {
      model.scale[jj] = std::sqrt(var);
    } else {
      model.scale[jj] = 1.0;
      model.unit_scaled.push_back(j);
    }
  }
  const Eigen::MatrixXd z = centered.array().rowwise() / model.scale.transpose().array();

  Eigen::BDCSVD<Eigen::MatrixXd> svd(z, Eigen::ComputeThinV);
  const auto& singular = svd.singularValues();
  const auto& v = svd.matrixV();

  const auto kk = static_cast<Eigen::Index>(k);
  model.components = v.leftCols(kk).transpose();
  model.explained_variance.resize(kk);
  for (Eigen::Index r = 0; r < kk; ++r) {
    const double s = r < singular.size() ? singular[r] : 0.0;
    model.explained_variance[r] = s * s / static_cast<double>(n - 1);
    Eigen::Index arg = 0;
    model.components.row(r).cwiseAbs().maxCoeff(&arg);
    // maxCoeff returns the first maximal index; ties resolve to it.
    if (model.components(r, arg) < 0.0) model.components.row(r) *= -1.0;
  }
  return model;
}

Eigen::VectorXd PcaModel::apply(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd z = (x - mean).cwiseQuotient(scale);
  Eigen::VectorXd out(components.rows());
  const auto d = static_cast<std::size_t>(components.cols());
  for (Eigen::Index r = 0; r < components.rows(); ++r) {
    out[r] = kernels::dot({components.row(r).data(), d}, {z.data(), d});
  }
  return out;
}

Eigen::VectorXd PcaModel::invert(const Eigen::VectorXd& coords) const {
  Eigen::VectorXd z = components.transpose() * coords;
  return z.cwiseProduct(scale) + mean;
}

}  // namespace ortglab
