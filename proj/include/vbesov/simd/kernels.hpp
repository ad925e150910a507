#pragma once

#include <cstddef>
#include <string_view>

namespace vbesov::simd {

enum class Backend { scalar, avx2 };

[[nodiscard]] std::string_view to_string(Backend b) noexcept;

struct KernelTable {
    Backend backend;
    // sum_i w[i] * exp(p[i] * (logmag[i] - shift))
    double (*modular_sum)(const double* logmag, const double* p, const double* w, std::size_t n,
                          double shift);
    // max_i a[i] * b[i] for non-negative inputs; 0 when n == 0
    double (*max_product)(const double* a, const double* b, std::size_t n);
};

[[nodiscard]] bool backend_available(Backend b) noexcept;

// Kernels of the active backend.  The default is the widest available
// backend; VBESOV_SIMD=scalar in the environment forces the reference path.
[[nodiscard]] const KernelTable& kernels() noexcept;
[[nodiscard]] const KernelTable& kernels(Backend b);
[[nodiscard]] Backend active_backend() noexcept;
void set_backend(Backend b);

namespace detail {
extern const KernelTable scalar_table;
#if defined(VBESOV_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
}  // namespace detail

}  // namespace vbesov::simd
