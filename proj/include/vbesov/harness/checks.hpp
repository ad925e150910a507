#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vbesov/harness/report.hpp"

namespace vbesov::harness {

// Each check fills configs and violations; run_check adds id, title, seed,
// settings and runtime.  All checks run on one-dimensional grids.

// t^{-alpha(x)} eta_{t,m+R}(x - y) <= c t^{-alpha(y)} eta_{t,m}(x - y)
[[nodiscard]] CheckReport check_pointwise_shift(const HarnessSettings& s);
// |theta_N * omega_N * g| <= c (eta_{N,m} * |omega_N * g|^r)^{1/r}
[[nodiscard]] CheckReport check_subconvolution(const HarnessSettings& s);
// eta_{v0,m} * eta_{v1,m} ~ eta_{min,m} and eta_{v,m} * chi_Q / |Q| ~ eta_{v,m}(x - y)
[[nodiscard]] CheckReport check_eta_algebra(const HarnessSettings& s);
// discrete and continuous Hardy inequalities
[[nodiscard]] CheckReport check_hardy(const HarnessSettings& s);
// gamma_m-damped mean power against the two-term right-hand side, on cubes and on intervals
[[nodiscard]] CheckReport check_key_modular(const HarnessSettings& s);
// ladder mixed norm against the discrete l^{q(0)} norm, with cubes, and the smoothing map
[[nodiscard]] CheckReport check_mixed_equivalence(const HarnessSettings& s);
// decay of t^{-n} mu(./t) * rho in t, and the atom/kernel decay in level offsets
[[nodiscard]] CheckReport check_kernel_decay(const HarnessSettings& s);
// elementary, q-monotone and Sobolev-type embeddings, and the S -> B -> S' chain
[[nodiscard]] CheckReport check_embeddings(const HarnessSettings& s);
// ratio matrix of every norm form across two frames and one local-mean pair
[[nodiscard]] CheckReport check_norm_equivalences(const HarnessSettings& s);
// atomic round trip, sequence norm, atom validation and pairing tails
[[nodiscard]] CheckReport check_atomic(const HarnessSettings& s);

struct CheckEntry {
    std::string_view id;
    std::string_view title;
    CheckReport (*run)(const HarnessSettings&);
};

[[nodiscard]] std::span<const CheckEntry> check_registry() noexcept;
[[nodiscard]] bool is_check_id(std::string_view id) noexcept;

[[nodiscard]] CheckReport run_check(std::string_view id, const HarnessSettings& s);

// Runs the checks on `jobs` workers; the result is ordered by id.
[[nodiscard]] std::vector<CheckReport> run_checks(const std::vector<std::string>& ids, const HarnessSettings& s,
                                                  unsigned jobs);

}  // namespace vbesov::harness
