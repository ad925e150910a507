#include "vbesov/expression.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "vbesov/error.hpp"

namespace vbesov {

namespace {

using Op = Expression::Op;
using Instr = Expression::Instr;

struct Failure {
    std::size_t pos;
    std::string message;
};

// Recursive descent straight into postfix.
class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    std::vector<Instr> run() {
        skip();
        if (pos_ == s_.size()) throw Failure{pos_, "empty expression"};
        sum();
        skip();
        if (pos_ != s_.size()) throw Failure{pos_, "unexpected '" + std::string(1, s_[pos_]) + "'"};
        return std::move(out_);
    }

private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void sum() {
        product();
        for (;;) {
            if (accept('+')) {
                product();
                out_.push_back({Op::add});
            } else if (accept('-')) {
                product();
                out_.push_back({Op::sub});
            } else {
                return;
            }
        }
    }

    void product() {
        unary();
        for (;;) {
            if (accept('*')) {
                unary();
                out_.push_back({Op::mul});
            } else if (accept('/')) {
                unary();
                out_.push_back({Op::div});
            } else {
                return;
            }
        }
    }

    void unary() {
        if (accept('-')) {
            unary();
            out_.push_back({Op::neg});
        } else if (accept('+')) {
            unary();
        } else {
            power();
        }
    }

    void power() {
        primary();
        if (accept('^')) {
            unary();   // 2^-1 and 2^3^2 = 2^(3^2)
            out_.push_back({Op::pow});
        }
    }

    void primary() {
        skip();
        if (pos_ == s_.size()) throw Failure{pos_, "expression ends early"};
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            sum();
            if (!accept(')')) throw Failure{pos_, "expected ')'"};
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            const std::string_view name = s_.substr(start, pos_ - start);
            identifier(name, start);
            return;
        }
        throw Failure{pos_, "unexpected '" + std::string(1, c) + "'"};
    }

    void number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            // Exponent only when digits follow; otherwise 'e' is left for the caller.
            std::size_t q = pos_ + 1;
            if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
            if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
                pos_ = q;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        double v = 0.0;
        const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (res.ec != std::errc() || res.ptr != s_.data() + pos_) throw Failure{start, "malformed number"};
        out_.push_back({Op::number, v});
    }

    void identifier(std::string_view name, std::size_t start) {
        static constexpr std::array<std::pair<std::string_view, Op>, 6> functions{{
            {"sin", Op::sin}, {"cos", Op::cos}, {"exp", Op::exp}, {"log", Op::log}, {"abs", Op::abs}, {"sqrt", Op::sqrt},
        }};
        for (const auto& [fname, op] : functions) {
            if (name != fname) continue;
            if (!accept('(')) throw Failure{pos_, "expected '(' after " + std::string(name)};
            sum();
            if (!accept(')')) throw Failure{pos_, "expected ')'"};
            out_.push_back({op});
            return;
        }
        if (name == "x") out_.push_back({Op::x});
        else if (name == "y") out_.push_back({Op::y});
        else if (name == "r") out_.push_back({Op::r});
        else if (name == "t") out_.push_back({Op::t});
        else if (name == "pi") out_.push_back({Op::number, std::numbers::pi});
        else if (name == "e") out_.push_back({Op::number, std::numbers::e});
        else throw Failure{start, "unknown name '" + std::string(name) + "'"};
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::vector<Instr> out_;
};

}  // namespace

std::optional<Expression> Expression::try_parse(std::string_view text, ExpressionParseFailure& failure) {
    Expression e;
    try {
        e.program_ = Parser(text).run();
    } catch (const Failure& f) {
        failure = {f.pos + 1, f.message};
        return std::nullopt;
    }
    e.text_ = std::string(text);
    for (const auto& in : e.program_) {
        const char c = in.op == Op::x ? 'x' : in.op == Op::y ? 'y' : in.op == Op::r ? 'r' : in.op == Op::t ? 't' : 0;
        if (c && e.used_.find(c) == std::string::npos) e.used_.push_back(c);
    }
    std::sort(e.used_.begin(), e.used_.end());
    return e;
}

Expression Expression::parse(std::string_view text) {
    ExpressionParseFailure f;
    auto e = try_parse(text, f);
    if (!e) fail(ErrorKind::parse, "column " + std::to_string(f.column) + ": " + f.message + " in '" + std::string(text) + "'");
    return std::move(*e);
}

bool Expression::uses(char variable) const noexcept { return used_.find(variable) != std::string::npos; }

double Expression::operator()(const ExpressionVariables& v) const {
    double stack[64] = {};
    std::size_t top = 0;
    std::vector<double> spill;   // only for unusually deep expressions
    double* st = stack;
    if (program_.size() > 64) {
        spill.resize(program_.size());
        st = spill.data();
    }
    for (const auto& in : program_) {
        switch (in.op) {
            case Op::number: st[top++] = in.value; break;
            case Op::x: st[top++] = v.x; break;
            case Op::y: st[top++] = v.y; break;
            case Op::r: st[top++] = std::hypot(v.x, v.y); break;
            case Op::t: st[top++] = v.t; break;
            case Op::add: --top; st[top - 1] += st[top]; break;
            case Op::sub: --top; st[top - 1] -= st[top]; break;
            case Op::mul: --top; st[top - 1] *= st[top]; break;
            case Op::div: --top; st[top - 1] /= st[top]; break;
            case Op::pow: --top; st[top - 1] = std::pow(st[top - 1], st[top]); break;
            case Op::neg: st[top - 1] = -st[top - 1]; break;
            case Op::sin: st[top - 1] = std::sin(st[top - 1]); break;
            case Op::cos: st[top - 1] = std::cos(st[top - 1]); break;
            case Op::exp: st[top - 1] = std::exp(st[top - 1]); break;
            case Op::log: st[top - 1] = std::log(st[top - 1]); break;
            case Op::abs: st[top - 1] = std::abs(st[top - 1]); break;
            case Op::sqrt: st[top - 1] = std::sqrt(st[top - 1]); break;
        }
    }
    return st[0];
}

}  // namespace vbesov
