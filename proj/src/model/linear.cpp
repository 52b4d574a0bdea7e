#include "ortglab/error.hpp"
#include "ortglab/model.hpp"

namespace ortglab {

double LinearModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != weights.size()) throw ArgumentError("linear model input dimension mismatch");
  return weights.dot(x) + bias;
}

LinearModel fit_linear_least_squares(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& targets) {
  if (inputs.rows() < 2) throw FitError("least squares needs at least 2 samples");
  if (inputs.rows() != targets.size()) throw FitError("input/target count mismatch");
  if (!inputs.allFinite() || !targets.allFinite()) throw FitError("least squares inputs must be finite");

  const Eigen::RowVectorXd x_mean = inputs.colwise().mean();
  const double y_mean = targets.mean();
  const Eigen::MatrixXd xc = inputs.rowwise() - x_mean;
  const Eigen::VectorXd yc = targets.array() - y_mean;

  LinearModel m;
  if (inputs.cols() == 0) {
    m.weights = Eigen::VectorXd();
  } else {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(xc);
    m.weights = cod.solve(yc);
  }
  m.bias = y_mean - x_mean.dot(m.weights);
  if (!m.weights.allFinite() || !std::isfinite(m.bias)) throw FitError("least squares produced non-finite weights");
  return m;
}

}  // namespace ortglab
