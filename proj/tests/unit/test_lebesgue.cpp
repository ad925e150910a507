#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "vbesov/error.hpp"
#include "vbesov/lebesgue.hpp"

using namespace vbesov;

namespace {

// Long-double bisection on the modular, to full precision.
long double oracle(const std::vector<double>& m, const std::vector<double>& p, const std::vector<double>& mu) {
    auto rho = [&](long double lam) {
        long double s = 0.0L;
        for (std::size_t i = 0; i < m.size(); ++i) s += mu[i] * std::pow(m[i] / lam, static_cast<long double>(p[i]));
        return s;
    };
    long double lo = 1e-30L, hi = 1e30L;
    for (int it = 0; it < 400; ++it) {
        const long double mid = std::sqrt(lo * hi);
        (rho(mid) > 1.0L ? lo : hi) = mid;
    }
    return hi;
}

}  // namespace

TEST(Luxemburg, MatchesOracle) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 1 + trial * 13;
        std::vector<double> m(n), p(n), mu(n);
        for (std::size_t i = 0; i < n; ++i) {
            m[i] = std::exp(20.0 * (u(rng) - 0.5));
            p[i] = trial % 3 == 0 ? 0.4 + 0.5 * u(rng) : 1.0 + 5.0 * u(rng);
            mu[i] = 1e-3 + u(rng);
        }
        if (n > 2) m[1] = 0.0;
        const auto r = luxemburg(WeightedSamples{m, p, mu});
        const long double want = oracle(m, p, mu);
        EXPECT_LE(std::abs(r.value - want), 1e-10L * want) << trial;
        EXPECT_LE(r.bracket_lo, r.value);
        EXPECT_GE(r.bracket_hi, r.value);
    }
}

TEST(Luxemburg, ConstantExponentIsLp) {
    const std::vector<double> m{1.0, 2.0, 3.0}, p(3, 3.0), mu{0.5, 0.25, 0.25};
    const double want = std::cbrt(0.5 + 8 * 0.25 + 27 * 0.25);
    EXPECT_NEAR(luxemburg(WeightedSamples{m, p, mu}).value, want, 1e-10 * want);
}

TEST(Luxemburg, ZeroAndScaling) {
    const std::vector<double> zero(5, 0.0), p(5, 2.5), mu(5, 0.1);
    EXPECT_EQ(luxemburg(WeightedSamples{zero, p, mu}).value, 0.0);
    std::vector<double> m{1, 2, 3, 4, 5}, q{1.5, 2, 3, 1.2, 4};
    const double a = luxemburg(WeightedSamples{m, q, mu}).value;
    for (auto& v : m) v *= 7.0;
    EXPECT_NEAR(luxemburg(WeightedSamples{m, q, mu}).value, 7.0 * a, 1e-9 * a);
}

TEST(Luxemburg, GridFunction) {
    const auto spec = make_grid(1, 16.0, 256);
    const auto f = GridFunction::sample_real(spec, [](const Point& x) { return std::exp(-x[0] * x[0]); });
    const auto p = ExponentField::constant(spec, 2.0, ExponentKind::p);
    EXPECT_NEAR(luxemburg_norm(f, p).value, l2_norm(f), 1e-10);
    EXPECT_NEAR(modular(f, p), l2_norm(f) * l2_norm(f), 1e-12);
}

TEST(Ladder, WeightsAndIntegral) {
    const auto ladder = make_ladder(8, 16);
    EXPECT_EQ(ladder.size(), 128u);
    for (int v = 1; v <= 8; ++v) {
        double s = 0.0;
        for (auto k = ladder.octave_begin(v); k < ladder.octave_end(v); ++k) {
            s += ladder.w[k];
            EXPECT_EQ(ladder.octave[k], v);
            EXPECT_GE(ladder.t[k], std::ldexp(1.0, -v));
            EXPECT_LE(ladder.t[k], std::ldexp(1.0, 1 - v));
        }
        EXPECT_NEAR(s, std::log(2.0), 1e-14);
    }
    // int_{2^-8}^1 t^2 dt/t
    double integral = 0.0;
    for (std::size_t k = 0; k < ladder.size(); ++k) integral += ladder.w[k] * ladder.t[k] * ladder.t[k];
    EXPECT_NEAR(integral, 0.5 * (1.0 - std::ldexp(1.0, -16)), 1e-14);
    EXPECT_NO_THROW(validate_ladder(ladder));
}

TEST(Ladder, GaussLegendreIntegratesPolynomials) {
    std::vector<double> x, w;
    gauss_legendre(5, x, w);
    double s8 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s8 += w[i] * std::pow(x[i], 8);
    EXPECT_NEAR(s8, 2.0 / 9.0, 1e-14);
}

TEST(TNorm, ConstantQ) {
    const auto ladder = make_ladder(6, 8);
    const auto q = ExponentField::sample_on_t_axis(ladder.t, [](double) { return 3.0; }, 3.0);
    std::vector<double> g(ladder.size());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = ladder.t[k];
    // (int_{2^-6}^1 t^3 dt/t)^{1/3}
    const double want = std::cbrt((1.0 - std::ldexp(1.0, -18)) / 3.0);
    EXPECT_NEAR(t_norm(g, q, ladder, TNormForm::variable).value, want, 1e-9);
    EXPECT_NEAR(t_norm(g, q, ladder, TNormForm::q0).value, want, 1e-9);
    EXPECT_NEAR(t_norm(g, q, ladder, TNormForm::sup).value, ladder.t.front(), 1e-15);
}

TEST(MixedNorm, ReducesToSequenceNorm) {
    // one sample per block with unit measure: || (a_v) ||_{l^q}
    std::vector<MixedBlock> blocks;
    const std::vector<double> a{3.0, 4.0, 12.0};
    for (double v : a) blocks.push_back({{std::log(v)}, {2.0}, {1.0}, 2.0});
    EXPECT_NEAR(mixed_norm(blocks).value, 13.0, 1e-9);
}
