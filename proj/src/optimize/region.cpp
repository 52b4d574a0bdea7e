#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <vector>

#include "ortglab/common.hpp"
#include "ortglab/error.hpp"
#include "ortglab/optimize.hpp"

namespace ortglab {

void FeasibleRegion::validate() const {
  double lower_freq = 0.0;
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    if (!(lower[j] >= 0.0 && upper[j] <= 1.0 && lower[j] <= upper[j])) {
      throw ArgumentError("region bounds for " + feature_names()[j] + " are invalid");
    }
  }
  for (Playtype p : kPlaytypes) lower_freq += lower[freq_index(p)];
  if (!(freq_sum_cap > 0.0 && freq_sum_cap <= 1.0)) throw ArgumentError("frequency cap must lie in (0,1]");
  if (lower_freq > freq_sum_cap) throw ArgumentError("region is empty: frequency lower bounds exceed the cap");
}

bool FeasibleRegion::contains(const FeatureArray& x, double tol) const {
  double s = 0.0;
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    if (!(x[j] >= lower[j] - tol && x[j] <= upper[j] + tol)) return false;
  }
  for (Playtype p : kPlaytypes) s += x[freq_index(p)];
  return s <= freq_sum_cap + tol;
}

FeasibleRegion derive_feasible_region(const Dataset& data, double margin) {
  if (data.empty()) throw ArgumentError("cannot derive a region from an empty dataset");
  if (!(margin >= 0.0) || !std::isfinite(margin)) throw ArgumentError("margin must be a nonnegative fraction");
  FeasibleRegion r;
  r.lower = data.rows.front().features.values;
  r.upper = r.lower;
  double lo_sum = data.rows.front().features.freq_sum();
  double hi_sum = lo_sum;
  for (const auto& row : data.rows) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      r.lower[j] = std::min(r.lower[j], row.features[j]);
      r.upper[j] = std::max(r.upper[j], row.features[j]);
    }
    lo_sum = std::min(lo_sum, row.features.freq_sum());
    hi_sum = std::max(hi_sum, row.features.freq_sum());
  }
  if (margin > 0.0) {
    for (std::size_t j = 0; j < kFeatureCount; ++j) {
      const double widen = margin * (r.upper[j] - r.lower[j]);
      r.lower[j] = std::max(0.0, r.lower[j] - widen);
      r.upper[j] = std::min(1.0, r.upper[j] + widen);
    }
    hi_sum += margin * (hi_sum - lo_sum);
  }
  r.freq_sum_cap = std::min(1.0, hi_sum);
  return r;
}

std::uint64_t region_fingerprint(const FeasibleRegion& region) {
  std::string text;
  for (std::size_t j = 0; j < kFeatureCount; ++j) {
    text += format_double(region.lower[j]) + "," + format_double(region.upper[j]) + ";";
  }
  text += format_double(region.freq_sum_cap);
  return fnv1a64(text);
}

FeatureArray project_feasible(const FeatureArray& x, const FeasibleRegion& region) {
  FeatureArray y{};
  for (std::size_t j = 0; j < kFeatureCount; ++j) y[j] = std::clamp(x[j], region.lower[j], region.upper[j]);

  std::array<std::size_t, kPlaytypeCount> idx{};
  double sum = 0.0;
  for (std::size_t p = 0; p < kPlaytypeCount; ++p) {
    idx[p] = freq_index(kPlaytypes[p]);
    sum += y[idx[p]];
  }
  if (sum <= region.freq_sum_cap) return y;

  auto freq_total = [&](double lambda) {
    double s = 0.0;
    for (std::size_t j : idx) s += std::clamp(x[j] - lambda, region.lower[j], region.upper[j]);
    return s;
  };
  // g(lambda) = freq_total(lambda) is nonincreasing and piecewise linear with
  // breakpoints where a coordinate enters or leaves its box.
  std::vector<double> breaks{0.0};
  for (std::size_t j : idx) {
    const double a = x[j] - region.upper[j];
    const double b = x[j] - region.lower[j];
    if (a > 0.0) breaks.push_back(a);
    if (b > 0.0) breaks.push_back(b);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  double lambda = breaks.back();
  double prev = breaks.front();
  double g_prev = freq_total(prev);
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    const double g = freq_total(breaks[i]);
    if (g <= region.freq_sum_cap) {
      lambda = g == g_prev ? breaks[i] : prev + (g_prev - region.freq_sum_cap) * (breaks[i] - prev) / (g_prev - g);
      break;
    }
    prev = breaks[i];
    g_prev = g;
  }
  // Rounding can leave the sum a few ulps above the cap; nudge lambda until
  // the result is feasible so that projecting twice changes nothing.
  double step = std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lambda));
  for (int attempt = 0; attempt < 64; ++attempt) {
    double total = 0.0;
    for (std::size_t j : idx) {
      y[j] = std::clamp(x[j] - lambda, region.lower[j], region.upper[j]);
      total += y[j];
    }
    if (total <= region.freq_sum_cap) break;
    lambda += step;
    step *= 2.0;
  }
  return y;
}

std::pair<std::size_t, double> parse_lock(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ArgumentError("lock '" + std::string(text) + "' must look like key=value");
  const auto key = text.substr(0, eq);
  const auto idx = feature_index(key);
  if (!idx) throw ArgumentError("unknown feature '" + std::string(key) + "' in lock");
  double v = 0.0;
  if (!parse_double(text.substr(eq + 1), v) || !std::isfinite(v)) {
    throw ArgumentError("lock value for " + std::string(key) + " is not a number");
  }
  return {*idx, v};
}

FeasibleRegion apply_locks(const FeasibleRegion& region, const LockMap& locked) {
  FeasibleRegion r = region;
  for (const auto& [j, v] : locked) {
    if (j >= kFeatureCount) throw ArgumentError("lock index out of range");
    if (!(v >= region.lower[j] && v <= region.upper[j])) {
      throw LockConflict(feature_names()[j], "locked " + feature_names()[j] + " = " + format_double(v) + " is outside the region [" +
                          format_double(region.lower[j]) + ", " + format_double(region.upper[j]) + "]");
    }
    r.lower[j] = v;
    r.upper[j] = v;
  }
  double lower_freq = 0.0;
  for (Playtype p : kPlaytypes) lower_freq += r.lower[freq_index(p)];
  if (lower_freq > r.freq_sum_cap) {
    throw LockConflict("freq_sum", "locked frequencies leave no room under the frequency cap");
  }
  return r;
}

}  // namespace ortglab
