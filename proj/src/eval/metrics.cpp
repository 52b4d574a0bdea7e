#include <cmath>

#include "ortglab/error.hpp"
#include "ortglab/eval.hpp"

namespace ortglab {

double rmse(std::span<const double> errors) {
  if (errors.empty()) throw ArgumentError("rmse of an empty error list");
  double acc = 0.0;
  for (double e : errors) acc += e * e;
  return std::sqrt(acc / static_cast<double>(errors.size()));
}

double r_squared(std::span<const double> actual, std::span<const double> predicted) {
  if (actual.empty() || actual.size() != predicted.size()) {
    throw ArgumentError("r_squared needs equal, nonempty actual/predicted lists");
  }
  double mean = 0.0;
  for (double a : actual) mean += a;
  mean /= static_cast<double>(actual.size());
  double sse = 0.0;
  double sst = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    sse += (actual[i] - predicted[i]) * (actual[i] - predicted[i]);
    sst += (actual[i] - mean) * (actual[i] - mean);
  }
  if (sst == 0.0) throw MetricError("undefined R²: actual values have zero variance");
  return 1.0 - sse / sst;
}

}  // namespace ortglab
