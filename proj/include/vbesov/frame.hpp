#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vbesov/grid.hpp"
#include "vbesov/lebesgue.hpp"

namespace vbesov {

// ===========================================================================
// Radial bump b(z), z = log2|xi|, smooth and supported in (-1, 1).
//   exp        : exp(-1 / (1 - z^2))
//   smoothstep : S(z + 1/2) - S(z - 1/2), S the C-infinity step on [-1/2, 1/2]
// ===========================================================================

enum class BumpKind { exp, smoothstep };

[[nodiscard]] std::string_view to_string(BumpKind kind) noexcept;
[[nodiscard]] BumpKind parse_bump_kind(std::string_view name);
[[nodiscard]] double bump_value(BumpKind kind, double z) noexcept;

// Continuous resolution of unity on the ladder:
//   F Phi(xi) + int_0^1 F phi(t xi) dt/t = 1,   F phi(xi) = b(log2|xi|) / c_b,
// with c_b = log 2 * int b and F Phi in closed form.
class CalderonFrame {
public:
    [[nodiscard]] const GridSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] const ScaleLadder& ladder() const noexcept { return ladder_; }
    [[nodiscard]] BumpKind kind() const noexcept { return kind_; }
    [[nodiscard]] double c_b() const noexcept { return c_b_; }
    [[nodiscard]] double identity_residual() const noexcept { return residual_; }
    // Upper end of the band where the discrete identity is certified.
    [[nodiscard]] double resolved_band() const noexcept { return band_; }

    [[nodiscard]] double phi_hat(double s) const noexcept;
    [[nodiscard]] double Phi_hat(double s) const noexcept;

    // Multipliers at the grid bins: F phi(t |xi_k|) and F Phi(|xi_k|).
    [[nodiscard]] std::vector<double> phi_multiplier(double t) const;
    [[nodiscard]] std::vector<double> Phi_multiplier() const;
    // Ladder node is inactive when its annulus misses every grid frequency.
    [[nodiscard]] bool node_active(std::size_t k) const noexcept;

    [[nodiscard]] GridFunction synthesize_phi_t(double t) const;
    [[nodiscard]] GridFunction synthesize_Phi() const;

    // FPhi + sum_k w_k F phi(t_k s) at radius s.
    [[nodiscard]] double identity_at(double s) const noexcept;

    [[nodiscard]] std::string id() const;

private:
    friend CalderonFrame build_resolution_of_unity(const GridSpec&, const ScaleLadder&, BumpKind);
    CalderonFrame() = default;

    GridSpec spec_;
    ScaleLadder ladder_;
    BumpKind kind_ = BumpKind::exp;
    double c_b_ = 0.0;
    double residual_ = 0.0;
    double band_ = 0.0;
    // Cumulative tail integral C(z) = int_z^1 b on a uniform z-grid.
    std::shared_ptr<const std::vector<double>> tail_;
    std::vector<double> radii_;   // |xi_k| per bin
};

// Throws construction error when the identity residual exceeds 1e-6 on the
// resolved band.
[[nodiscard]] CalderonFrame build_resolution_of_unity(const GridSpec& spec, const ScaleLadder& ladder,
                                                      BumpKind kind = BumpKind::exp);

// ===========================================================================
// Local means:  F k0 = exp(-|xi|^2 / (2 eps^2)),  F k = |xi|^(2m) F k0,
// m = ceil((S + 1) / 2), so k has vanishing moments through order S.
// ===========================================================================

struct LocalMeanCertificate {
    double k0_min_on_ball = 0.0;       // min |F k0| on |xi| < 2 eps
    double k_min_on_annulus = 0.0;     // min |F k| on eps/2 < |xi| < 2 eps
    double worst_relative_moment = 0.0;
    std::vector<double> moments;       // int x^beta k, beta = 0..S (first axis)
    bool pass = false;
};

class LocalMeanPair {
public:
    [[nodiscard]] int S() const noexcept { return S_; }
    [[nodiscard]] int m() const noexcept { return m_; }
    [[nodiscard]] double epsilon() const noexcept { return eps_; }
    [[nodiscard]] const GridSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] double k0_hat(double s) const noexcept;
    [[nodiscard]] double k_hat(double s) const noexcept;
    [[nodiscard]] std::vector<double> k_multiplier(double t) const;
    [[nodiscard]] std::vector<double> k0_multiplier() const;
    [[nodiscard]] GridFunction k0() const;
    [[nodiscard]] GridFunction k() const;
    [[nodiscard]] const LocalMeanCertificate& certificate() const noexcept { return cert_; }
    [[nodiscard]] std::string id() const;

private:
    friend LocalMeanPair build_local_mean_pair(const GridSpec&, int, double);
    LocalMeanPair() = default;
    GridSpec spec_;
    int S_ = 1;
    int m_ = 1;
    double eps_ = 1.0;
    LocalMeanCertificate cert_;
};

[[nodiscard]] LocalMeanPair build_local_mean_pair(const GridSpec& spec, int S, double epsilon);

// eta_{t,m}(x) = t^-n (1 + |x|/t)^-m; requires m > n.
[[nodiscard]] GridFunction eta_kernel(const GridSpec& spec, double t, double m);

}  // namespace vbesov
