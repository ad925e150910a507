#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "vbesov/atomic.hpp"
#include "vbesov/error.hpp"
#include "vbesov/harness/bank.hpp"

using namespace vbesov;

namespace {

struct Setup {
    GridSpec spec = make_grid(1, 16.0, 256);
    CalderonFrame frame = build_resolution_of_unity(spec, make_ladder(6, 64));
    GridFunction f = GridFunction::sample_real(spec, [](const Point& x) { return std::exp(-x[0] * x[0]); });
};

const Setup& setup() {
    static const Setup s;
    return s;
}

}  // namespace

TEST(Atomic, MultiIndices) {
    EXPECT_EQ(multi_indices(1, 3).size(), 4u);
    EXPECT_EQ(multi_indices(2, 2).size(), 6u);
    const auto m = multi_indices(2, 1);
    EXPECT_EQ(m[0], (MultiIndex{0, 0}));
}

TEST(Atomic, RoundTripAndParseval) {
    const auto& s = setup();
    const auto dec = analyze(s.f, s.frame);
    EXPECT_GT(dec.coefficients().size(), 0u);
    const auto back = synthesize(dec);
    EXPECT_LT(l2_norm(back.minus(s.f)), 1e-5 * l2_norm(s.f));
    const auto pc = parseval_check(s.f, s.frame, dec);
    EXPECT_NEAR(pc.ratio, 1.0, 1e-6);
    for (const auto& [cube, lambda] : dec.coefficients()) EXPECT_GE(lambda, 0.0);
}

TEST(Atomic, HypothesisOnKAndL) {
    const auto& s = setup();
    const auto alpha = ExponentField::constant(s.spec, 2.5, ExponentKind::alpha);
    const auto p = ExponentField::constant(s.spec, 2.0, ExponentKind::p);
    AnalyzeOptions opt;
    opt.alpha = &alpha;
    opt.p = &p;
    opt.K = 2;
    try {
        (void)analyze(s.f, s.frame, opt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::hypothesis);
    }
    const auto neg = ExponentField::constant(s.spec, -1.5, ExponentKind::alpha);
    opt.alpha = &neg;
    opt.L = 0;
    EXPECT_THROW((void)analyze(s.f, s.frame, opt), Error);
    opt.L = 1;
    EXPECT_NO_THROW((void)analyze(s.f, s.frame, opt));
}

// Partition of unity and the derivative recursion of cardinal B-splines.
TEST(Atomic, BSplines) {
    for (int d : {2, 3, 5})
        for (double x : {0.1, 0.5, 0.77}) {
            double s = 0.0;
            for (int k = -d - 1; k <= d + 1; ++k) s += harness::bspline(d, x + d + k);
            EXPECT_NEAR(s, 1.0, 1e-12);
            const double h = 1e-5, y = x + 1.3;
            const double fd = (harness::bspline(d, y + h) - harness::bspline(d, y - h)) / (2 * h);
            EXPECT_NEAR(harness::bspline_derivative(d, 1, y), fd, 1e-8);
        }
}

TEST(Atomic, SplineAtomValidates) {
    const auto spec = make_grid(1, 16.0, 4096);
    for (int L : {-1, 0, 1}) {
        const DyadicCube cube{3, {2, 0}};
        const auto a = harness::make_spline_atom(spec, cube, 2, L);
        const auto d = validate_atom(a, cube, 2, L, 3.0);
        EXPECT_TRUE(d.support_pass) << L;
        EXPECT_LE(d.support_leak, kSupportTolerance);
        EXPECT_LE(d.derivative_constant, 1.0 + 1e-3) << L;
        EXPECT_GT(d.derivative_constant, 0.9) << L;
        EXPECT_EQ(d.moments_checked, L >= 0);
        EXPECT_TRUE(d.moment_pass) << L;
    }
}

TEST(Atomic, WideAtomFailsSupport) {
    const auto spec = make_grid(1, 16.0, 4096);
    const DyadicCube cube{2, {0, 0}};
    const auto a = harness::make_spline_atom(spec, cube, 1, 0, 6.0);
    const auto d = validate_atom(a, cube, 1, 0, 3.0);
    EXPECT_FALSE(d.support_pass);
    EXPECT_FALSE(d.pass);
    EXPECT_GT(d.gamma_effective, 3.0);
}

TEST(Atomic, ExportImportRoundTrip) {
    const auto& s = setup();
    const auto dec = analyze(s.f, s.frame);
    const auto path = std::filesystem::temp_directory_path() / "vbesov_test_dec.csv";
    export_decomposition(path, dec);
    const auto back = import_decomposition(path);
    EXPECT_EQ(back.coefficients(), dec.coefficients());
    EXPECT_EQ(back.spec(), dec.spec());
    EXPECT_EQ(back.C_phi(), dec.C_phi());
    const auto g = synthesize(back);
    EXPECT_LT(l2_norm(g.minus(synthesize(dec))), 1e-12 * l2_norm(s.f));
}

TEST(Atomic, SequenceNormOfSingleCoefficient) {
    const auto& s = setup();
    AtomicDecomposition dec(s.spec, s.frame.ladder(), 3, 2, 0, 3.0);
    const DyadicCube cube{2, {1, 0}};
    dec.set_coefficient(cube, 5.0);
    const auto alpha = ExponentField::constant(s.spec, 0.5, ExponentKind::alpha);
    const auto p = ExponentField::constant(s.spec, 2.0, ExponentKind::p);
    const auto q = ExponentField::sample_on_t_axis(s.frame.ladder().t, [](double) { return 2.0; }, 2.0);
    // 2^{v (alpha + 1/2)} |lambda| || chi_Q ||_p with ||chi_Q||_2 = 2^{-v/2}
    const double want = std::pow(2.0, 2 * (0.5 + 0.5)) * 5.0 * std::pow(2.0, -1.0);
    EXPECT_NEAR(sequence_norm_b(dec, alpha, p, q, SequenceForm::discrete), want, 1e-9 * want);
    EXPECT_THROW(dec.set_coefficient(DyadicCube{4, {0, 0}}, 1.0), Error);
    EXPECT_THROW(dec.set_coefficient(cube, -1.0), Error);
}
