#include <cmath>
#include <filesystem>
#include <numbers>

#include <gtest/gtest.h>

#include "vbesov/error.hpp"
#include "vbesov/exponents.hpp"

using namespace vbesov;

namespace {

constexpr double kPi = std::numbers::pi;

// Every pair, no sampling.
double brute_clog(const GridSpec& spec, const std::vector<double>& g) {
    double best = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            const double d = std::abs(spec.coordinate(int(i)) - spec.coordinate(int(j)));
            best = std::max(best, std::abs(g[i] - g[j]) * std::log(std::exp(1.0) + 1.0 / d));
        }
    return best;
}

ExponentField p_sin(const GridSpec& spec) {
    return ExponentField::sample_on_grid(
        spec, [&](const Point& x) { return 2.0 + 0.5 * std::sin(2 * kPi * x[0] / spec.box_length); },
        ExponentKind::p);
}

}  // namespace

TEST(Exponents, ConstantField) {
    const auto spec = make_grid(1, 16.0, 64);
    const auto p = ExponentField::constant(spec, 3.0, ExponentKind::p);
    EXPECT_TRUE(p.is_constant());
    EXPECT_EQ(p.min(), 3.0);
    EXPECT_EQ(p.clog_local(), 0.0);
}

TEST(Exponents, Admissibility) {
    const auto spec = make_grid(1, 16.0, 64);
    try {
        (void)ExponentField::constant(spec, 0.5, ExponentKind::p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::admissibility);
    }
    // alpha may be negative
    EXPECT_NO_THROW((void)ExponentField::constant(spec, -0.5, ExponentKind::alpha));
    EXPECT_THROW((void)ExponentField::on_t_axis({1.0, 0.5}, {2.0, -1.0}, 2.0), Error);
    EXPECT_THROW((void)ExponentField::on_t_axis({0.5, 1.0}, {2.0, 2.0}, 2.0), Error);
}

TEST(Exponents, LocalConstantMatchesAllPairs) {
    const auto spec = make_grid(1, 16.0, 256);
    const auto p = p_sin(spec);
    EXPECT_NEAR(p.clog_local(), brute_clog(spec, p.samples()), 1e-14);
}

TEST(Exponents, SampledScanStaysBelowAllPairs) {
    const auto spec = make_grid(1, 16.0, 4096);
    const auto p = p_sin(spec);
    const auto est = estimate_log_holder(p, {false, false, 1'000'000});
    EXPECT_LE(est.pairs_examined, 1'000'000u);
    const double exact = brute_clog(spec, p.samples());
    EXPECT_LE(est.clog_local, exact * (1 + 1e-12));
    EXPECT_GE(est.clog_local, 0.9 * exact);
}

TEST(Exponents, ClassOfSmoothAndJumpFields) {
    const auto spec = make_grid(1, 16.0, 256);
    const auto smooth = check_class(p_sin(spec));
    EXPECT_TRUE(smooth.is_Clog_loc);
    EXPECT_FALSE(smooth.resolution_limited);
    const auto jump = check_class(ExponentField::sample_on_grid(
        spec, [](const Point& x) { return x[0] < 0.0 ? 2.0 : 3.0; }, ExponentKind::p));
    EXPECT_TRUE(jump.resolution_limited);
    EXPECT_FALSE(jump.is_Clog_loc);
    EXPECT_FALSE(jump.is_Plog);
}

TEST(Exponents, DecayConstant) {
    const auto spec = make_grid(1, 16.0, 256);
    // |p(x) - 2| log(e + |x|) = 1 for p = 2 + 1 / log(e + |x|)
    const auto p = ExponentField::sample_on_grid(
        spec, [](const Point& x) { return 2.0 + 1.0 / std::log(std::exp(1.0) + std::abs(x[0])); },
        ExponentKind::p, 2.0);
    const auto est = estimate_log_holder(p, {false, true, 1'000'000});
    ASSERT_TRUE(est.clog_decay.has_value());
    EXPECT_NEAR(*est.clog_decay, 1.0, 1e-12);
}

TEST(Exponents, QAtOrigin) {
    std::vector<double> t;
    for (int k = 0; k <= 60; ++k) t.push_back(std::pow(2.0, -0.25 * k));
    const auto good = ExponentField::sample_on_t_axis(
        t, [](double s) { return 2.0 + 1.0 / std::log(std::exp(1.0) + 1.0 / s); }, 2.0);
    EXPECT_TRUE(check_class(good).is_log_holder_at_origin);
    EXPECT_NEAR(good.value_at_t(0.0), 2.0, 0.0);
    const auto bad = ExponentField::sample_on_t_axis(
        t, [](double s) { return 2.0 + 1.0 / std::log(std::exp(1.0) + std::log(std::exp(1.0) + 1.0 / s)); }, 2.0);
    EXPECT_FALSE(check_class(bad).is_log_holder_at_origin);
}

TEST(Exponents, InterpolatesInLogT) {
    const auto q = ExponentField::on_t_axis({1.0, 0.25}, {2.0, 4.0}, 3.0);
    EXPECT_DOUBLE_EQ(q.value_at_t(0.5), 3.0);
    EXPECT_DOUBLE_EQ(q.value_at_t(1.0), 2.0);
    EXPECT_DOUBLE_EQ(q.value_at_t(0.1), 4.0);
}

TEST(Exponents, CsvRoundTrip) {
    const auto spec = make_grid(1, 16.0, 64);
    const auto p = ExponentField::sample_on_grid(
        spec, [](const Point& x) { return 2.0 + std::exp(-x[0] * x[0]) / 3.0; }, ExponentKind::p, 2.0, "bump");
    const auto path = std::filesystem::temp_directory_path() / "vbesov_test_p.csv";
    write_exponent_csv(path, p);
    const auto back = read_exponent_csv(path);
    EXPECT_EQ(back.samples(), p.samples());
    EXPECT_EQ(back.limit(), p.limit());
    EXPECT_EQ(back.label(), "bump");
    EXPECT_EQ(back.kind(), ExponentKind::p);
}
