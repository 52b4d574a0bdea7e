#pragma once

// Raw kernel entry points. Kept free of standard-library headers so the AVX2
// translation unit cannot emit AVX-encoded copies of shared inline functions.

#include <cstddef>

namespace ortglab::kernels::detail {

double dot_scalar(const double* a, const double* b, std::size_t n);
double sum_scalar(const double* a, std::size_t n);
void axpy_scalar(double alpha, const double* x, double* y, std::size_t n);
void relu_scalar(const double* z, double* out, std::size_t n);
void relu_backward_scalar(const double* z, const double* g, double* out, std::size_t n);
void sub_scalar(const double* a, const double* b, double* out, std::size_t n);

double dot_avx2(const double* a, const double* b, std::size_t n);
double sum_avx2(const double* a, std::size_t n);
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n);
void relu_avx2(const double* z, double* out, std::size_t n);
void relu_backward_avx2(const double* z, const double* g, double* out, std::size_t n);
void sub_avx2(const double* a, const double* b, double* out, std::size_t n);

}  // namespace ortglab::kernels::detail
