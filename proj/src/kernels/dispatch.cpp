#include <cstdlib>
#include <string_view>

#include "ortglab/kernels.hpp"
#include "variants.hpp"

namespace ortglab::kernels {

namespace {

constexpr Table kScalar{Isa::scalar,           "scalar",
                        detail::dot_scalar,    detail::sum_scalar,
                        detail::axpy_scalar,   detail::relu_scalar,
                        detail::relu_backward_scalar, detail::sub_scalar};

#if defined(ORTGLAB_HAVE_AVX2)
constexpr Table kAvx2{Isa::avx2,           "avx2",
                      detail::dot_avx2,    detail::sum_avx2,
                      detail::axpy_avx2,   detail::relu_avx2,
                      detail::relu_backward_avx2, detail::sub_avx2};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const Table& select() {
  const char* forced = std::getenv("ORTG_LAB_ISA");
  if (forced != nullptr && std::string_view(forced) == "scalar") return kScalar;
  if (const Table* t = avx2_table()) return *t;
  return kScalar;
}

}  // namespace

const Table& scalar_table() noexcept { return kScalar; }

const Table* avx2_table() noexcept {
#if defined(ORTGLAB_HAVE_AVX2)
  static const bool supported = cpu_has_avx2();
  return supported ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() noexcept {
  static const Table& table = select();
  return table;
}

}  // namespace ortglab::kernels
