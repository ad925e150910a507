#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "vbesov/exponents.hpp"
#include "vbesov/grid.hpp"
#include "vbesov/harness/report.hpp"
#include "vbesov/lebesgue.hpp"

namespace vbesov {

// Plain-text `key = value` file, one entry per line.  Lines whose first
// non-blank character is '#' are comments; an empty value unsets an optional
// key.  Unknown or repeated keys are parse errors.
//
//   dimension          1 or 2
//   box_length         side of the periodic box
//   points             samples per axis (power of two)
//   octaves            V
//   nodes_per_octave   J
//   alpha              expression in x, y, r, or csv:<path>
//   p                  expression in x, y, r, or csv:<path>
//   p_limit            optional p at infinity (decay estimate)
//   q                  expression in t
//   q_zero             optional q(0); default: the expression at t = 0
//   frame              exp | smoothstep
//   form               direct | discretized | q0 | peetre | local_mean_prime | local_mean_double_prime
//   peetre_a, local_mean_S, local_mean_epsilon
//   K, L, gamma        atomic decomposition
//   function           bank:<member> | file:<path> (.vbgf or .csv) | expression in x, y, r
//   seed, output, jobs (0 = logical cores), refine (true | false)
struct RunConfig {
    int dimension = 1;
    double box_length = 16.0;
    int points = 2048;
    int octaves = 8;
    int nodes_per_octave = 64;
    std::string alpha = "0.5";
    std::string p = "2";
    std::optional<double> p_limit;
    std::string q = "2";
    std::optional<double> q_zero;
    std::string frame = "exp";
    std::string form = "direct";
    double peetre_a = 2.0;
    int local_mean_S = 1;
    double local_mean_epsilon = 1.0;
    int K = 2;
    int L = 0;
    double gamma = 3.0;
    std::string function = "bank:gauss_1";
    std::uint64_t seed = 7;
    std::string output = "out";
    unsigned jobs = 0;
    bool refine = true;

    bool operator==(const RunConfig&) const = default;
};

// Throws ErrorKind::parse with "line L, column C" in the message.
[[nodiscard]] RunConfig parse_config(std::string_view text);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);
// Every key in schema order; parse_config(emit_config(c)) == c.
[[nodiscard]] std::string emit_config(const RunConfig& c);
void save_config(const std::filesystem::path& path, const RunConfig& c);

// Builders; exponent admissibility errors surface here.
[[nodiscard]] GridSpec grid_spec(const RunConfig& c);
[[nodiscard]] ScaleLadder scale_ladder(const RunConfig& c);
[[nodiscard]] ExponentField alpha_field(const RunConfig& c, const GridSpec& spec);
[[nodiscard]] ExponentField p_field(const RunConfig& c, const GridSpec& spec);
[[nodiscard]] ExponentField q_field(const RunConfig& c, const ScaleLadder& ladder);
[[nodiscard]] GridFunction input_function(const RunConfig& c, const GridSpec& spec);
[[nodiscard]] harness::HarnessSettings harness_settings(const RunConfig& c);

}  // namespace vbesov
