#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vbesov/exponents.hpp"
#include "vbesov/grid.hpp"
#include "vbesov/lebesgue.hpp"

namespace vbesov::harness {

enum class MemberFamily { gaussian, modulated, weierstrass, indicator, noise, other };

[[nodiscard]] std::string_view to_string(MemberFamily family) noexcept;

struct BankMember {
    std::string name;
    MemberFamily family = MemberFamily::other;
    GridFunction f;
    std::optional<double> smoothness;   // Weierstrass parameter s
};

// Deterministic in (spec, seed); the same seed on a finer grid samples the
// same functions.
struct FunctionBank {
    std::uint64_t seed = 0;
    GridSpec spec;
    std::vector<BankMember> members;

    [[nodiscard]] const BankMember& at(std::string_view name) const;
};

[[nodiscard]] FunctionBank make_function_bank(const GridSpec& spec, std::uint64_t seed);

// Fraction of spectral energy at |xi| > cutoff.
[[nodiscard]] double spectral_tail_fraction(const GridFunction& f, double cutoff);

// Exponent bank on one grid and ladder.
struct ExponentBank {
    ExponentField p_const;      // 2
    ExponentField p_sin;        // 2 + 0.5 sin(2 pi x / L)
    ExponentField alpha_const;  // 0.5
    ExponentField alpha_sign;   // 0.2 + 0.5 sin(2 pi x / L), changes sign
    ExponentField q_const;      // 2
    ExponentField q_log;        // 2 + 1 / log(e + 1/t)
};

[[nodiscard]] ExponentBank make_exponent_bank(const GridSpec& spec, const ScaleLadder& ladder);

// Cardinal B-spline of degree d (support [0, d + 1]) and its r-th derivative.
[[nodiscard]] double bspline(int d, double x) noexcept;
[[nodiscard]] double bspline_derivative(int d, int r, double x) noexcept;

// 1-D [K, L]-atom on `cube`: a scaled (L+1)-th derivative of a degree K+L+2
// B-spline, support width `width` (in cube units) centred on the cube, and
// normalised so that sup |D^beta a| = 2^{v(beta + 1/2)} at the largest beta.
[[nodiscard]] GridFunction make_spline_atom(const GridSpec& spec, const DyadicCube& cube, int K, int L,
                                            double width = 2.5);

// Writes every member as <dir>/<name>.vbgf plus an index.json.
void write_bank(const std::filesystem::path& dir, const FunctionBank& bank);

}  // namespace vbesov::harness
