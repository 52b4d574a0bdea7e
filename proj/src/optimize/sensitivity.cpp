#include <algorithm>
#include <cmath>

#include "ortglab/error.hpp"
#include "ortglab/optimize.hpp"

namespace ortglab {

namespace {

// Sums in sorted order so the result does not depend on row order.
double sorted_sum(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

SensitivityReport sensitivity_rank(const TrainedPredictor& p, const Dataset& data) {
  if (data.empty()) throw ArgumentError("sensitivity needs a nonempty dataset");
  const std::size_t n = data.size();
  std::vector<FeatureArray> grads;
  grads.reserve(n);
  for (const auto& row : data.rows) grads.push_back(p.gradient(row.features.values));

  SensitivityReport report;
  std::vector<double> column(n);
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    SensitivityEntry e;
    e.feature = j;
    for (std::size_t i = 0; i < n; ++i) column[i] = grads[i][j];
    e.mean_gradient = sorted_sum(column) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) column[i] = data.rows[i].features[j];
    const double mean = sorted_sum(column) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) column[i] = (column[i] - mean) * (column[i] - mean);
    e.feature_std = n > 1 ? std::sqrt(sorted_sum(column) / static_cast<double>(n - 1)) : 0.0;
    e.score = e.mean_gradient * e.feature_std;
    report.ranking.push_back(e);
  }
  const auto& names = feature_names();
  std::sort(report.ranking.begin(), report.ranking.end(), [&](const SensitivityEntry& a, const SensitivityEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return names[a.feature] < names[b.feature];
  });
  return report;
}

}  // namespace ortglab
