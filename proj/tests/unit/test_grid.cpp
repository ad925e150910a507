#include <cmath>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "vbesov/error.hpp"
#include "vbesov/grid.hpp"

using namespace vbesov;

namespace {

constexpr double kPi = std::numbers::pi;

double gauss(const Point& x) { return std::exp(-0.5 * (x[0] * x[0] + x[1] * x[1])); }

}  // namespace

TEST(Grid, RejectsBadShapes) {
    EXPECT_THROW((void)make_grid(3, 16.0, 64), Error);
    EXPECT_THROW((void)make_grid(1, 16.0, 100), Error);
    EXPECT_THROW((void)make_grid(1, 16.0, 8), Error);
    EXPECT_THROW((void)make_grid(1, -1.0, 64), Error);
    EXPECT_THROW((void)make_grid(2, 16.0, 512), Error);
    EXPECT_NO_THROW((void)make_grid(2, 16.0, 64));
}

TEST(Grid, Coordinates) {
    const auto spec = make_grid(1, 16.0, 64);
    EXPECT_DOUBLE_EQ(spec.coordinate(0), -8.0);
    EXPECT_DOUBLE_EQ(spec.spacing(), 0.25);
    EXPECT_DOUBLE_EQ(spec.nyquist(), kPi * 64 / 16.0);
    EXPECT_DOUBLE_EQ(spec.wavenumber(1), 2 * kPi / 16.0);
    EXPECT_DOUBLE_EQ(spec.wavenumber(63), -2 * kPi / 16.0);
}

// Closed form: F exp(-x^2/2) = sqrt(2 pi) exp(-xi^2/2).
TEST(Grid, GaussianTransform1D) {
    const auto spec = make_grid(1, 40.0, 512);
    const auto f = GridFunction::sample_real(spec, gauss);
    const auto s = spectrum(f);
    double worst = 0.0;
    for (int k = 0; k < spec.points; ++k) {
        const double xi = spec.wavenumber(k);
        const cplx want = std::sqrt(2 * kPi) * std::exp(-0.5 * xi * xi);
        worst = std::max(worst, std::abs(s[k] - want));
    }
    EXPECT_LT(worst, 1e-12);
}

TEST(Grid, GaussianTransform2D) {
    const auto spec = make_grid(2, 30.0, 128);
    const auto s = spectrum(GridFunction::sample_real(spec, gauss));
    const auto r = radial_frequencies(spec);
    double worst = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k)
        worst = std::max(worst, std::abs(s[k] - 2 * kPi * std::exp(-0.5 * r[k] * r[k])));
    EXPECT_LT(worst, 1e-10);
}

TEST(Grid, InverseIsExact) {
    const auto spec = make_grid(1, 16.0, 256);
    const auto f = GridFunction::sample(spec, [](const Point& x) { return cplx(std::sin(x[0]), x[0] * 0.1); });
    const auto g = from_spectrum(spec, spectrum(f));
    EXPECT_LT(l2_norm(g.minus(f)), 1e-12 * l2_norm(f));
}

TEST(Grid, IntegralAndNorm) {
    const auto spec = make_grid(1, 40.0, 1024);
    const auto f = GridFunction::sample_real(spec, gauss);
    EXPECT_NEAR(integrate(f), std::sqrt(2 * kPi), 1e-12);
    // int exp(-x^2) = sqrt(pi)
    EXPECT_NEAR(l2_norm(f), std::sqrt(std::sqrt(kPi)), 1e-12);
}

// Gaussians of variances a and b convolve to a Gaussian of variance a + b.
TEST(Grid, ConvolutionOfGaussians) {
    const auto spec = make_grid(1, 40.0, 1024);
    auto g = [](double var) {
        return [var](const Point& x) { return std::exp(-x[0] * x[0] / (2 * var)) / std::sqrt(2 * kPi * var); };
    };
    const auto h = convolve(GridFunction::sample_real(spec, g(0.5)), GridFunction::sample_real(spec, g(1.5)));
    const auto want = GridFunction::sample_real(spec, g(2.0));
    EXPECT_LT(h.minus(want).max_abs(), 1e-12);
}

TEST(Grid, SpectralDerivative) {
    const auto spec = make_grid(1, 2 * kPi, 64);
    const auto f = GridFunction::sample_real(spec, [](const Point& x) { return std::sin(3 * x[0]); });
    const auto d2 = spectral_derivative(f, {2, 0});
    const auto want = GridFunction::sample_real(spec, [](const Point& x) { return -9 * std::sin(3 * x[0]); });
    EXPECT_LT(d2.minus(want).max_abs(), 1e-11);
    EXPECT_THROW((void)spectral_derivative(f, {0, 1}), Error);
}

TEST(Grid, GridMismatch) {
    const auto a = GridFunction::zeros(make_grid(1, 16.0, 64));
    const auto b = GridFunction::zeros(make_grid(1, 16.0, 128));
    try {
        (void)a.plus(b);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::grid_mismatch);
    }
}

TEST(Grid, CubePartitionCoversOnce) {
    for (int dim : {1, 2}) {
        const auto spec = make_grid(dim, 16.0, 64);
        for (int v : {0, 1, 3}) {
            const auto part = partition_cubes(spec, v);
            std::vector<int> seen(spec.total(), 0);
            for (std::size_t c = 0; c < part.cubes.size(); ++c)
                for (auto i : part.members[c]) {
                    ++seen[i];
                    EXPECT_EQ(part.owner[i], static_cast<int>(c));
                    EXPECT_TRUE(part.cubes[c].contains(spec.point(i), dim));
                }
            for (int s : seen) EXPECT_EQ(s, 1);
            const std::set<DyadicCube> unique(part.cubes.begin(), part.cubes.end());
            EXPECT_EQ(unique.size(), part.cubes.size());
        }
    }
}

TEST(Grid, CubeGeometry) {
    const DyadicCube q{2, {-3, 0}};
    EXPECT_DOUBLE_EQ(q.side(), 0.25);
    EXPECT_DOUBLE_EQ(q.center()[0], -0.625);
    EXPECT_TRUE(q.contains({-0.75, 0.0}, 1));
    EXPECT_FALSE(q.contains({-0.5, 0.0}, 1));
}

TEST(Grid, PeriodicDisplacement) {
    const auto spec = make_grid(1, 16.0, 64);
    EXPECT_DOUBLE_EQ(periodic_displacement(spec, {7.5, 0}, {-7.5, 0})[0], -1.0);
    EXPECT_DOUBLE_EQ(periodic_displacement(spec, {1.0, 0}, {0.5, 0})[0], 0.5);
}
