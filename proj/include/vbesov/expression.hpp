#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vbesov {

// Pure arithmetic over the variables x, y (second coordinate), r = |(x, y)|
// and t, with
//   + - * / ^, unary minus, parentheses,
//   sin cos exp log abs sqrt, and the constants pi, e.
// '^' binds tighter than unary minus and is right-associative.
struct ExpressionVariables {
    double x = 0.0, y = 0.0, t = 0.0;
};

struct ExpressionParseFailure {
    std::size_t column = 0;   // 1-based, into the parsed text
    std::string message;
};

class Expression {
public:
    // Throws ErrorKind::parse with the column in the message.
    [[nodiscard]] static Expression parse(std::string_view text);
    [[nodiscard]] static std::optional<Expression> try_parse(std::string_view text, ExpressionParseFailure& failure);

    [[nodiscard]] double operator()(const ExpressionVariables& v) const;
    [[nodiscard]] double at_x(double x) const { return (*this)({x, 0.0, 0.0}); }
    [[nodiscard]] double at_t(double t) const { return (*this)({0.0, 0.0, t}); }

    [[nodiscard]] const std::string& text() const noexcept { return text_; }
    [[nodiscard]] bool uses(char variable) const noexcept;
    [[nodiscard]] bool is_constant() const noexcept { return used_.empty(); }

    enum class Op : unsigned char { number, x, y, r, t, add, sub, mul, div, pow, neg, sin, cos, exp, log, abs, sqrt };
    struct Instr {
        Op op;
        double value = 0.0;
    };

private:
    std::string text_;
    std::vector<Instr> program_;   // postfix
    std::string used_;             // sorted variable letters
};

}  // namespace vbesov
