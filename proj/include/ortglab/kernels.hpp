#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Dense inner-loop kernels used by MLP training, PCA projection and the
// optimizer. Every kernel has a scalar reference implementation; an AVX2/FMA
// variant is compiled separately and chosen at runtime when the CPU supports
// it. Set ORTG_LAB_ISA=scalar to force the reference path.
namespace ortglab::kernels {

enum class Isa { scalar, avx2 };

struct Table {
  Isa isa;
  std::string_view name;
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out = max(z, 0)
  void (*relu)(const double* z, double* out, std::size_t n);
  // out = z > 0 ? g : 0  (subgradient at exactly 0 is 0)
  void (*relu_backward)(const double* z, const double* g, double* out, std::size_t n);
  // out = a - b
  void (*sub)(const double* a, const double* b, double* out, std::size_t n);
};

const Table& scalar_table() noexcept;

// nullptr when the variant was not compiled in or the CPU lacks AVX2/FMA.
const Table* avx2_table() noexcept;

// The table selected for this process. Chosen once, on first use.
const Table& active() noexcept;

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}

inline double sum(std::span<const double> a) { return active().sum(a.data(), a.size()); }

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace ortglab::kernels
