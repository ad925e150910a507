#include <cmath>

#include <gtest/gtest.h>

#include "vbesov/error.hpp"
#include "vbesov/harness/bank.hpp"
#include "vbesov/harness/checks.hpp"
#include "vbesov/json_out.hpp"

using namespace vbesov;
using namespace vbesov::harness;

TEST(Bank, DeterministicAndNested) {
    const auto coarse = make_function_bank(make_grid(1, 16.0, 256), 7);
    const auto again = make_function_bank(make_grid(1, 16.0, 256), 7);
    const auto fine = make_function_bank(make_grid(1, 16.0, 512), 7);
    ASSERT_EQ(coarse.members.size(), fine.members.size());
    EXPECT_GE(coarse.members.size(), 20u);
    for (std::size_t m = 0; m < coarse.members.size(); ++m) {
        const auto& a = coarse.members[m].f;
        const auto& b = fine.members[m].f;
        EXPECT_EQ(coarse.members[m].name, fine.members[m].name);
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i], again.members[m].f[i]);
            EXPECT_NEAR(a[i].real(), b[2 * i].real(), 1e-12) << coarse.members[m].name;
        }
    }
    const auto other = make_function_bank(make_grid(1, 16.0, 256), 8);
    EXPECT_NE(l2_norm(other.at("noise_20").f.minus(coarse.at("noise_20").f)), 0.0);
    EXPECT_THROW((void)coarse.at("nope"), Error);
}

TEST(Bank, SpectralTail) {
    const auto spec = make_grid(1, 16.0, 256);
    const auto bank = make_function_bank(spec, 7);
    EXPECT_LT(spectral_tail_fraction(bank.at("gauss_1").f, 10.0), 1e-20);
    EXPECT_GT(spectral_tail_fraction(bank.at("weierstrass_0.3").f, 10.0), 1e-3);
}

TEST(Report, Helpers) {
    EXPECT_EQ(relative_change(0.0, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(relative_change(1.0, 2.0), 0.5);
    ConfigOutcome c;
    c.constant = 1.0;
    c.refined_constant = 1.2;
    judge_bounded(c);
    EXPECT_TRUE(c.ok);
    c.refined_constant = 2.0;
    judge_bounded(c);
    EXPECT_FALSE(c.ok);
    SubsetMaxima m;
    for (double v : {1.0, 3.0, 2.0, 5.0}) m.add(v);
    EXPECT_EQ(m.max(), 5.0);
    EXPECT_TRUE(m.monotone());
}

TEST(Report, JsonRoundTripAndRollup) {
    CheckReport r;
    r.id = "hardy";
    r.title = "t";
    r.seed = 7;
    ConfigOutcome good;
    good.name = "a";
    good.constant = 1.5;
    good.refined_constant = 1.25;
    r.add(good);
    ConfigOutcome bad;
    bad.name = "b";
    bad.ok = false;
    bad.failure = "too big";
    bad.constant = INFINITY;
    r.add(bad);
    r.runtime_seconds = 3.0;
    EXPECT_FALSE(r.pass());
    EXPECT_EQ(r.violations.size(), 1u);
    const auto j = r.to_json();
    EXPECT_TRUE(j.contains("timings"));
    const auto back = report_from_json(j);
    EXPECT_EQ(dump_json(back.to_json()), dump_json(j));
    const auto csv = rollup_csv({r});
    EXPECT_EQ(csv.rfind("id,title,config,expectation,constant,refined_constant,ok,pass", 0), 0u);
    EXPECT_EQ(r.config("a").constant, 1.5);
}

TEST(Checks, Registry) {
    EXPECT_EQ(check_registry().size(), 10u);
    EXPECT_TRUE(is_check_id("hardy"));
    EXPECT_FALSE(is_check_id("nope"));
    EXPECT_THROW((void)run_checks({"nope"}, HarnessSettings{}, 1), Error);
}

TEST(Checks, CheapChecksPassWithoutRefinement) {
    HarnessSettings s;
    s.refine = false;
    const auto reports = run_checks({"pointwise_shift", "hardy"}, s, 1);
    ASSERT_EQ(reports.size(), 2u);
    EXPECT_EQ(reports[0].id, "hardy");
    for (const auto& r : reports) {
        EXPECT_TRUE(r.pass()) << r.id << ' ' << dump_json(r.to_json());
        EXPECT_FALSE(r.configs.empty());
        for (const auto& c : r.configs) EXPECT_TRUE(std::isfinite(c.constant) || c.expectation == Expectation::blow_up);
    }
}

TEST(Checks, DeterministicReports) {
    HarnessSettings s;
    s.refine = false;
    auto a = run_check("kernel_decay", s).to_json();
    auto b = run_check("kernel_decay", s).to_json();
    a.erase("timings");
    b.erase("timings");
    EXPECT_EQ(dump_json(a), dump_json(b));
}
