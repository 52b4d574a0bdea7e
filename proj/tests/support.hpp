#pragma once

// Independent reference implementations used as test oracles. Nothing here
// calls into Eigen or the library's numerical code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ortglab/dataset.hpp"
#include "ortglab/features.hpp"
#include "ortglab/model.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline Matrix covariance_of_zscores(const Matrix& rows) {
  const std::size_t n = rows.size(), d = rows.front().size();
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
  for (auto& m : mean) m /= static_cast<double>(n);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < d; ++j) sd[j] += (r[j] - mean[j]) * (r[j] - mean[j]);
  for (auto& s : sd) {
    s = std::sqrt(s / static_cast<double>(n - 1));
    if (s == 0.0) s = 1.0;
  }
  Matrix c(d, std::vector<double>(d, 0.0));
  for (const auto& r : rows) {
    for (std::size_t a = 0; a < d; ++a) {
      const double za = (r[a] - mean[a]) / sd[a];
      for (std::size_t b = a; b < d; ++b) c[a][b] += za * (r[b] - mean[b]) / sd[b];
    }
  }
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) c[b][a] = c[a][b] /= static_cast<double>(n - 1);
  return c;
}

// Cyclic Jacobi rotations on a symmetric matrix. Returns eigenvalues in
// descending order with the matching eigenvectors as rows.
inline std::pair<std::vector<double>, Matrix> jacobi_eigen(Matrix a) {
  const std::size_t d = a.size();
  Matrix v(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(d);
  for (std::size_t i = 0; i < d; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  std::vector<double> values;
  Matrix vectors;
  for (std::size_t i : order) {
    values.push_back(a[i][i]);
    std::vector<double> col(d);
    for (std::size_t k = 0; k < d; ++k) col[k] = v[k][i];
    vectors.push_back(std::move(col));
  }
  return {values, vectors};
}

// Gaussian elimination with partial pivoting.
inline std::vector<double> solve(Matrix a, std::vector<double> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    std::swap(a[col], a[piv]);
    std::swap(b[col], b[piv]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

// Least squares with an intercept via the normal equations [X 1]^T [X 1].
// Returns weights followed by the bias.
inline std::vector<double> normal_equations(const Matrix& x, const std::vector<double>& y) {
  const std::size_t d = x.front().size() + 1;
  Matrix g(d, std::vector<double>(d, 0.0));
  std::vector<double> rhs(d, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<double> row = x[i];
    row.push_back(1.0);
    for (std::size_t a = 0; a < d; ++a) {
      rhs[a] += row[a] * y[i];
      for (std::size_t b = 0; b < d; ++b) g[a][b] += row[a] * row[b];
    }
  }
  return solve(g, rhs);
}

// Straightforward forward pass over nested loops; returns the output and
// records every hidden pre-activation.
inline double reference_forward(const ortglab::MlpModel& m, const std::vector<double>& x,
                                std::vector<double>* pre = nullptr) {
  std::vector<double> a = x;
  for (std::size_t l = 0; l < m.layers.size(); ++l) {
    const auto& layer = m.layers[l];
    std::vector<double> z(layer.outputs);
    for (std::size_t o = 0; o < layer.outputs; ++o) {
      double s = layer.biases[o];
      for (std::size_t i = 0; i < layer.inputs; ++i) s += layer.weight(o, i) * a[i];
      z[o] = s;
    }
    if (l + 1 == m.layers.size()) return z[0];
    if (pre) pre->insert(pre->end(), z.begin(), z.end());
    for (auto& v : z) v = v > 0.0 ? v : 0.0;
    a = z;
  }
  return 0.0;
}

inline double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
}

}  // namespace oracle

namespace testdata {

// Random dataset with valid frequencies, drawn with std::mt19937_64 so it is
// independent of the library's generator.
inline ortglab::Dataset random_dataset(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ortglab::Dataset data;
  for (std::size_t i = 0; i < n; ++i) {
    ortglab::TeamSeasonRow row;
    const std::size_t year = 2000 + i / 30;
    row.season = std::to_string(year) + "-" + std::to_string((year + 1) % 100 / 10) + std::to_string((year + 1) % 10);
    row.team = "T" + std::to_string(i);
    row.ortg = 100.0 + 20.0 * u(gen);
    double freq_total = 0.0;
    for (std::size_t j = 0; j < ortglab::kFeatureCount; ++j) {
      row.features[j] = 0.05 + 0.9 * u(gen);
    }
    for (auto p : ortglab::kPlaytypes) freq_total += row.features[ortglab::freq_index(p)];
    const double target = 0.7 + 0.2 * u(gen);
    for (auto p : ortglab::kPlaytypes) row.features[ortglab::freq_index(p)] *= target / freq_total;
    data.rows.push_back(row);
  }
  return data;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("ortglab_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

}  // namespace testdata
