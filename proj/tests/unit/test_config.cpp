#include <cmath>
#include <numbers>
#include <string>

#include <gtest/gtest.h>

#include "vbesov/config.hpp"
#include "vbesov/error.hpp"
#include "vbesov/expression.hpp"

using namespace vbesov;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::io;
}

std::string message_of(std::string_view text) {
    try {
        (void)parse_config(text);
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(Expression, Precedence) {
    auto v = [](const char* s) { return Expression::parse(s).at_x(0.0); };
    EXPECT_EQ(v("1 + 2 * 3"), 7.0);
    EXPECT_EQ(v("-2^2"), -4.0);
    EXPECT_EQ(v("2^3^2"), 512.0);
    EXPECT_EQ(v("2^-1"), 0.5);
    EXPECT_EQ(v("(1 + 2) * 3"), 9.0);
    EXPECT_EQ(v("8 / 4 / 2"), 1.0);
    EXPECT_EQ(v("1 - 2 - 3"), -4.0);
    EXPECT_EQ(v("1.5e2"), 150.0);
    EXPECT_DOUBLE_EQ(v("cos(pi)"), -1.0);
    EXPECT_DOUBLE_EQ(v("log(e)"), 1.0);
}

TEST(Expression, Variables) {
    const auto e = Expression::parse("2 + 0.5 * sin(x) + y - r * t");
    EXPECT_TRUE(e.uses('x'));
    EXPECT_TRUE(e.uses('t'));
    EXPECT_FALSE(Expression::parse("2 * pi").uses('x'));
    EXPECT_TRUE(Expression::parse("2 * pi").is_constant());
    EXPECT_DOUBLE_EQ(e({3.0, 4.0, 2.0}), 2 + 0.5 * std::sin(3.0) + 4.0 - 10.0);
    // a dangling exponent marker is not a number, and juxtaposition is not a product
    ExpressionParseFailure f;
    EXPECT_FALSE(Expression::try_parse("2e", f));
    EXPECT_EQ(f.column, 2u);
}

TEST(Expression, ErrorColumns) {
    ExpressionParseFailure f;
    EXPECT_FALSE(Expression::try_parse("1 + * 2", f));
    EXPECT_EQ(f.column, 5u);
    EXPECT_FALSE(Expression::try_parse("sin x", f));
    EXPECT_EQ(f.column, 5u);
    EXPECT_FALSE(Expression::try_parse("foo(1)", f));
    EXPECT_EQ(f.column, 1u);
    EXPECT_FALSE(Expression::try_parse("(1 + 2", f));
    EXPECT_EQ(f.column, 7u);
    EXPECT_FALSE(Expression::try_parse("", f));
    EXPECT_EQ(kind_of([] { (void)Expression::parse("1 +"); }), ErrorKind::parse);
}

TEST(Config, Defaults) {
    const auto c = parse_config("");
    EXPECT_EQ(c, RunConfig{});
}

TEST(Config, ParsesEveryKey) {
    const auto c = parse_config(
        "# comment\n"
        "dimension = 1\n"
        "box_length = 12.5\n"
        "points = 512\n"
        "  octaves=6\n"
        "nodes_per_octave = 32\n"
        "alpha = 0.2 + 0.5 * sin(x)\n"
        "p = csv:p.csv\n"
        "p_limit = 2\n"
        "q = 2 + t\n"
        "q_zero =\n"
        "frame = smoothstep\n"
        "form = peetre\n"
        "peetre_a = 3\n"
        "local_mean_S = 2\n"
        "local_mean_epsilon = 0.5\n"
        "K = 3\n"
        "L = 1\n"
        "gamma = 4\n"
        "function = bank:weierstrass_1.2\n"
        "seed = 99\n"
        "output = run # not a comment\n"
        "jobs = 2\n"
        "refine = false\n");
    EXPECT_EQ(c.box_length, 12.5);
    EXPECT_EQ(c.octaves, 6);
    EXPECT_EQ(c.alpha, "0.2 + 0.5 * sin(x)");
    EXPECT_EQ(c.p, "csv:p.csv");
    EXPECT_EQ(c.p_limit, 2.0);
    EXPECT_FALSE(c.q_zero.has_value());
    EXPECT_EQ(c.frame, "smoothstep");
    EXPECT_EQ(c.output, "run # not a comment");
    EXPECT_EQ(c.seed, 99u);
    EXPECT_FALSE(c.refine);
}

TEST(Config, RoundTrip) {
    RunConfig c;
    c.alpha = "0.3 * cos(x / 2)";
    c.p_limit = 2.25;
    c.q_zero = 1.0 / 3.0;
    c.box_length = 0.1;
    c.refine = false;
    c.jobs = 3;
    EXPECT_EQ(parse_config(emit_config(c)), c);
    EXPECT_EQ(parse_config(emit_config(RunConfig{})), RunConfig{});
}

TEST(Config, ErrorsCarryLineAndColumn) {
    EXPECT_NE(message_of("points = 512\nbogus = 1\n").find("line 2, column 1"), std::string::npos);
    EXPECT_NE(message_of("points = 512\npoints = 256\n").find("given twice"), std::string::npos);
    EXPECT_NE(message_of("alpha = 1 + * 2\n").find("line 1, column 13"), std::string::npos);
    EXPECT_NE(message_of("points = lots\n").find("line 1, column 10"), std::string::npos);
    EXPECT_NE(message_of("  just words\n").find("line 1, column 3"), std::string::npos);
    EXPECT_NE(message_of("q = 2 + x\n").find("not allowed"), std::string::npos);
    EXPECT_NE(message_of("alpha =\n").find("missing value"), std::string::npos);
    EXPECT_EQ(kind_of([] { (void)parse_config("frame = box\n"); }), ErrorKind::parse);
}

TEST(Config, Builders) {
    RunConfig c;
    c.points = 256;
    c.p = "0.5";
    const auto spec = grid_spec(c);
    EXPECT_EQ(spec.points, 256);
    EXPECT_EQ(kind_of([&] { (void)p_field(c, spec); }), ErrorKind::admissibility);
    c.p = "2 + 0.5 * sin(x)";
    const auto p = p_field(c, spec);
    EXPECT_DOUBLE_EQ(p[0], 2 + 0.5 * std::sin(spec.coordinate(0)));
    c.q = "1 / t";
    EXPECT_EQ(kind_of([&] { (void)q_field(c, scale_ladder(c)); }), ErrorKind::admissibility);
    c.q_zero = 2.0;
    c.q = "2 + t";
    const auto q = q_field(c, scale_ladder(c));
    EXPECT_EQ(q.value_at_t(0.0), 2.0);
    c.function = "exp(-x^2)";
    EXPECT_DOUBLE_EQ(input_function(c, spec)[3].real(), std::exp(-std::pow(spec.coordinate(3), 2)));
    c.function = "bank:no_such_member";
    EXPECT_THROW((void)input_function(c, spec), Error);
    EXPECT_EQ(harness_settings(c).points, 256);
}
