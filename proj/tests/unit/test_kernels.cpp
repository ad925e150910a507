#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "vbesov/simd/kernels.hpp"

using namespace vbesov::simd;

namespace {

struct Inputs {
    std::vector<double> logmag, p, w, a, b;
};

Inputs make_inputs(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Inputs in;
    for (std::size_t i = 0; i < n; ++i) {
        in.logmag.push_back(-30.0 * u(rng) + 5.0);
        in.p.push_back(1.0 + 4.0 * u(rng));
        in.w.push_back(u(rng) * 1e-2);
        in.a.push_back(u(rng) * 10.0);
        in.b.push_back(u(rng));
    }
    // a zero sample, as the Luxemburg code passes -inf for it
    if (n > 3) in.logmag[3] = -INFINITY;
    return in;
}

long double reference_sum(const Inputs& in, double shift) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < in.p.size(); ++i)
        s += static_cast<long double>(in.w[i]) * std::exp(static_cast<long double>(in.p[i]) * (in.logmag[i] - shift));
    return s;
}

}  // namespace

TEST(Kernels, ScalarMatchesReference) {
    const auto& k = kernels(Backend::scalar);
    for (std::size_t n : {0u, 1u, 7u, 64u, 1001u}) {
        const auto in = make_inputs(n, 11 + n);
        const double got = k.modular_sum(in.logmag.data(), in.p.data(), in.w.data(), n, -2.0);
        const long double want = reference_sum(in, -2.0);
        EXPECT_LE(std::abs(got - want), 1e-14 * std::abs(want) + 1e-300) << n;
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m = std::max(m, in.a[i] * in.b[i]);
        EXPECT_EQ(k.max_product(in.a.data(), in.b.data(), n), m);
    }
}

TEST(Kernels, Avx2MatchesScalar) {
    if (!backend_available(Backend::avx2)) GTEST_SKIP() << "no AVX2 on this host";
    const auto& s = kernels(Backend::scalar);
    const auto& v = kernels(Backend::avx2);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 256u, 4099u}) {
        const auto in = make_inputs(n, 100 + n);
        for (double shift : {-3.0, 0.0, 4.5}) {
            const double a = s.modular_sum(in.logmag.data(), in.p.data(), in.w.data(), n, shift);
            const double b = v.modular_sum(in.logmag.data(), in.p.data(), in.w.data(), n, shift);
            EXPECT_LE(std::abs(a - b), 1e-13 * std::abs(a) + 1e-300) << n << ' ' << shift;
        }
        EXPECT_EQ(s.max_product(in.a.data(), in.b.data(), n), v.max_product(in.a.data(), in.b.data(), n)) << n;
    }
}

TEST(Kernels, BackendSwitch) {
    const Backend before = active_backend();
    set_backend(Backend::scalar);
    EXPECT_EQ(kernels().backend, Backend::scalar);
    EXPECT_EQ(to_string(Backend::scalar), "scalar");
    set_backend(before);
    EXPECT_EQ(active_backend(), before);
}
