#include <algorithm>
#include <cmath>

#include "vbesov/simd/kernels.hpp"

namespace vbesov::simd::detail {
namespace {

double modular_sum_scalar(const double* logmag, const double* p, const double* w, std::size_t n,
                          double shift) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += w[i] * std::exp(p[i] * (logmag[i] - shift));
    return acc;
}

double max_product_scalar(const double* a, const double* b, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, a[i] * b[i]);
    return m;
}

}  // namespace

const KernelTable scalar_table{Backend::scalar, &modular_sum_scalar, &max_product_scalar};

}  // namespace vbesov::simd::detail
