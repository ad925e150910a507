#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "vbesov/error.hpp"
#include "vbesov/frame.hpp"

using namespace vbesov;

namespace {

// Composite Simpson on [a, b].
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

double exp_bump(double z) { return std::abs(z) < 1.0 ? std::exp(-1.0 / (1.0 - z * z)) : 0.0; }

}  // namespace

TEST(Frame, ExpBumpConstantAndProfiles) {
    const auto spec = make_grid(1, 16.0, 1024);
    const auto frame = build_resolution_of_unity(spec, make_ladder(8, 64), BumpKind::exp);
    const double mass = simpson(exp_bump, -1.0, 1.0);
    EXPECT_NEAR(frame.c_b(), std::log(2.0) * mass, 1e-10);
    for (double s : {0.3, 0.6, 1.0, 1.5, 1.9, 2.5}) {
        EXPECT_NEAR(frame.phi_hat(s), exp_bump(std::log2(s)) / frame.c_b(), 1e-12) << s;
        // F Phi(s) = int_{log2 s}^1 b / int b
        const double z = std::log2(s);
        const double tail = z >= 1.0 ? 0.0 : simpson(exp_bump, std::max(z, -1.0), 1.0);
        EXPECT_NEAR(frame.Phi_hat(s), tail / mass, 1e-8) << s;
    }
}

TEST(Frame, IdentityResidual) {
    const auto spec = make_grid(1, 16.0, 1024);
    for (auto kind : {BumpKind::exp, BumpKind::smoothstep}) {
        const auto frame = build_resolution_of_unity(spec, make_ladder(8, 64), kind);
        EXPECT_LT(frame.identity_residual(), 1e-6);
        for (double s = 0.0; s <= frame.resolved_band(); s += 0.37) EXPECT_NEAR(frame.identity_at(s), 1.0, 1e-6) << s;
    }
}

TEST(Frame, CoarseLadderIsRejected) {
    const auto spec = make_grid(1, 16.0, 1024);
    try {
        (void)build_resolution_of_unity(spec, make_ladder(8, 4), BumpKind::exp);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::construction);
    }
}

TEST(Frame, SynthesisedKernelsReproduceMultipliers) {
    const auto spec = make_grid(1, 16.0, 512);
    const auto frame = build_resolution_of_unity(spec, make_ladder(6, 64));
    const double t = 0.125;
    const auto s = spectrum(frame.synthesize_phi_t(t));
    const auto m = frame.phi_multiplier(t);
    for (std::size_t k = 0; k < s.size(); ++k) EXPECT_NEAR(std::abs(s[k]), m[k], 1e-12);
    EXPECT_NEAR(integrate(frame.synthesize_Phi()), 1.0, 1e-12);
}

TEST(Frame, ParseKind) {
    EXPECT_EQ(parse_bump_kind("smoothstep"), BumpKind::smoothstep);
    EXPECT_THROW((void)parse_bump_kind("box"), Error);
    EXPECT_EQ(bump_value(BumpKind::smoothstep, 0.0), 1.0);
    EXPECT_EQ(bump_value(BumpKind::exp, 1.0), 0.0);
}

TEST(LocalMeans, MomentsAndNormalisation) {
    const auto spec = make_grid(1, 40.0, 1024);
    for (int S : {0, 1, 2, 3}) {
        const auto pair = build_local_mean_pair(spec, S, 1.0);
        EXPECT_EQ(pair.m(), (S + 2) / 2);
        EXPECT_TRUE(pair.certificate().pass);
        const auto k = pair.k();
        for (int beta = 0; beta <= S; ++beta) {
            std::vector<double> w(k.size());
            double mom = 0.0, scale = 0.0;
            for (std::size_t i = 0; i < k.size(); ++i) {
                const double xb = std::pow(spec.point(i)[0], beta);
                mom += xb * k[i].real() * spec.spacing();
                scale += std::abs(xb * k[i].real()) * spec.spacing();
            }
            EXPECT_LT(std::abs(mom), 1e-10 * scale) << S << ' ' << beta;
        }
        EXPECT_NEAR(integrate(pair.k0()), 1.0, 1e-12);
    }
}

// int t^-1 (1 + |x|/t)^-m dx = 2 / (m - 1); the cusp at 0 costs about h^2 m / (6 t^2).
TEST(LocalMeans, EtaKernelMass) {
    const auto spec = make_grid(1, 64.0, 8192);
    const double t = 0.5, m = 3.0;
    const auto eta = eta_kernel(spec, t, m);
    const double tail = 2.0 / (m - 1) * std::pow(1 + 32.0 / t, 1 - m);
    EXPECT_NEAR(integrate(eta), 2.0 / (m - 1) - tail, 3e-4);
    EXPECT_THROW((void)eta_kernel(spec, t, 1.0), Error);
}
