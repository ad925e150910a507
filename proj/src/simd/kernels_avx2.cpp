#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "vbesov/simd/kernels.hpp"

namespace vbesov::simd::detail {
namespace {

// exp(x) for x in [-708, 709]; lanes below -708 return 0.
inline __m256d exp_pd(__m256d x) {
    const __m256d lo = _mm256_set1_pd(-708.0);
    const __m256d hi = _mm256_set1_pd(709.0);
    const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
    x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

    const __m256d log2e = _mm256_set1_pd(1.4426950408889634);
    const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    // Taylor polynomial of degree 13 on |r| <= ln2/2.
    static constexpr double c[] = {
        1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0,
        1.0 / 40320.0,      1.0 / 5040.0,      1.0 / 720.0,      1.0 / 120.0,     1.0 / 24.0,
        1.0 / 6.0,          0.5,               1.0,              1.0};
    __m256d y = _mm256_set1_pd(c[0]);
    for (int k = 1; k < 14; ++k) y = _mm256_fmadd_pd(y, r, _mm256_set1_pd(c[k]));

    // Scale by 2^n through the exponent field.
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    __m256i n64 = _mm256_cvtepi32_epi64(n32);
    n64 = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
    n64 = _mm256_slli_epi64(n64, 52);
    y = _mm256_mul_pd(y, _mm256_castsi256_pd(n64));
    return _mm256_andnot_pd(underflow, y);
}

double hsum(__m256d v) {
    alignas(32) double t[4];
    _mm256_store_pd(t, v);
    return (t[0] + t[1]) + (t[2] + t[3]);
}

double modular_sum_avx2(const double* logmag, const double* p, const double* w, std::size_t n,
                        double shift) {
    const __m256d s = _mm256_set1_pd(shift);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d x0 = _mm256_mul_pd(_mm256_loadu_pd(p + i), _mm256_sub_pd(_mm256_loadu_pd(logmag + i), s));
        __m256d x1 =
            _mm256_mul_pd(_mm256_loadu_pd(p + i + 4), _mm256_sub_pd(_mm256_loadu_pd(logmag + i + 4), s));
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), exp_pd(x0), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i + 4), exp_pd(x1), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        __m256d x0 = _mm256_mul_pd(_mm256_loadu_pd(p + i), _mm256_sub_pd(_mm256_loadu_pd(logmag + i), s));
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), exp_pd(x0), acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += w[i] * std::exp(p[i] * (logmag[i] - shift));
    return acc;
}

double max_product_avx2(const double* a, const double* b, std::size_t n) {
    __m256d m0 = _mm256_setzero_pd();
    __m256d m1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        m0 = _mm256_max_pd(m0, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        m1 = _mm256_max_pd(m1, _mm256_mul_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4)));
    }
    m0 = _mm256_max_pd(m0, m1);
    alignas(32) double t[4];
    _mm256_store_pd(t, m0);
    double m = std::max(std::max(t[0], t[1]), std::max(t[2], t[3]));
    for (; i < n; ++i) m = std::max(m, a[i] * b[i]);
    return m;
}

}  // namespace

extern const KernelTable avx2_table;
const KernelTable avx2_table{Backend::avx2, &modular_sum_avx2, &max_product_avx2};

}  // namespace vbesov::simd::detail
