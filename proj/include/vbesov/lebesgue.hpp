#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "vbesov/exponents.hpp"
#include "vbesov/grid.hpp"

namespace vbesov {

// ===========================================================================
// Scale ladder: quadrature nodes t_k in (2^-V, 1] for integrals dt/t.
// Octave v (1-based) covers [2^-v, 2^(1-v)]; its weights sum to log 2.
// ===========================================================================

enum class LadderRule { gauss_legendre, midpoint };

struct ScaleLadder {
    int octaves = 0;
    int nodes_per_octave = 0;
    LadderRule rule = LadderRule::gauss_legendre;
    std::vector<double> t;       // strictly decreasing
    std::vector<double> w;       // weights for dt/t
    std::vector<int> octave;     // 1-based octave of each node

    [[nodiscard]] std::size_t size() const noexcept { return t.size(); }
    [[nodiscard]] std::size_t octave_begin(int v) const noexcept {
        return static_cast<std::size_t>(v - 1) * nodes_per_octave;
    }
    [[nodiscard]] std::size_t octave_end(int v) const noexcept {
        return static_cast<std::size_t>(v) * nodes_per_octave;
    }
    bool operator==(const ScaleLadder&) const = default;
};

[[nodiscard]] ScaleLadder make_ladder(int octaves, int nodes_per_octave,
                                      LadderRule rule = LadderRule::gauss_legendre);
void validate_ladder(const ScaleLadder& ladder);

// Gauss-Legendre nodes and weights on [-1, 1], ascending.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// ===========================================================================
// Modulars and Luxemburg norms
// ===========================================================================

struct NormResult {
    double value = 0.0;
    double modular_at_value = 0.0;
    int iterations = 0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
};

// Samples of |f| with per-sample exponent and measure (cell volume times weight).
struct WeightedSamples {
    std::span<const double> magnitude;
    std::span<const double> exponent;
    std::span<const double> measure;
};

// sum measure * (magnitude / lambda)^exponent
[[nodiscard]] double modular_value(const WeightedSamples& s, double lambda);

// inf{lambda > 0 : modular(lambda) <= 1} by bisection; exponents may be any
// positive values (below 1 the result is a quasi-norm).
[[nodiscard]] NormResult luxemburg(const WeightedSamples& s);

// Same with log-magnitudes given directly (-inf marks a zero sample).
[[nodiscard]] NormResult luxemburg_log(std::span<const double> log_magnitude, std::span<const double> exponent,
                                       std::span<const double> measure);

[[nodiscard]] double modular(const GridFunction& f, const ExponentField& p, std::span<const double> weight = {});
[[nodiscard]] NormResult luxemburg_norm(const GridFunction& f, const ExponentField& p,
                                        std::span<const double> weight = {});

// One octave block of a mixed l^q(L^p) quantity: samples with exponent p,
// measure, and the scalar outer exponent q of the block.
struct MixedBlock {
    std::vector<double> log_magnitude;
    std::vector<double> exponent;
    std::vector<double> measure;
    double q = 2.0;
};

// Modular  sum_v || |f_v / mu|^q_v ||_{p / q_v}, with the inner quantity
// computed as a Luxemburg norm of exponent p / q_v.
[[nodiscard]] NormResult mixed_norm(const std::vector<MixedBlock>& blocks);

// fs[i] is the block of octave v = i + 1; q_v = q(3 * 2^(-v-1)).
[[nodiscard]] NormResult mixed_sequence_norm(const std::vector<GridFunction>& fs, const ExponentField& p,
                                             const ExponentField& q, std::span<const double> weight = {});

[[nodiscard]] double octave_midpoint(int v) noexcept;

enum class TNormForm { variable, q0, sup };

[[nodiscard]] std::string_view to_string(TNormForm form) noexcept;

// Norm of g(t_k) in L^{q(t)}((0,1], dt/t); q must be sampled on the ladder.
[[nodiscard]] NormResult t_norm(std::span<const double> g, const ExponentField& q, const ScaleLadder& ladder,
                                TNormForm form);

}  // namespace vbesov
