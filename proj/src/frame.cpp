#include "vbesov/frame.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vbesov/error.hpp"

namespace vbesov {

namespace {

constexpr int kTailIntervals = 4096;
constexpr double kResidualLimit = 1e-6;

double smooth_e(double u) noexcept { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

double smooth_step(double u) noexcept {
    const double a = smooth_e(u + 0.5), b = smooth_e(0.5 - u);
    return a / (a + b);
}

double z_of(int i) noexcept { return -1.0 + 2.0 * i / kTailIntervals; }

std::vector<double> tail_table(BumpKind kind) {
    std::vector<double> gx, gw;
    gauss_legendre(8, gx, gw);
    std::vector<double> c(kTailIntervals + 1, 0.0);
    const double half = 1.0 / kTailIntervals;
    for (int i = kTailIntervals - 1; i >= 0; --i) {
        const double mid = z_of(i) + half;
        double s = 0.0;
        for (std::size_t j = 0; j < gx.size(); ++j) s += gw[j] * bump_value(kind, mid + half * gx[j]);
        c[i] = c[i + 1] + half * s;
    }
    return c;
}

}  // namespace

std::string_view to_string(BumpKind kind) noexcept { return kind == BumpKind::exp ? "exp" : "smoothstep"; }

BumpKind parse_bump_kind(std::string_view name) {
    if (name == "exp") return BumpKind::exp;
    if (name == "smoothstep") return BumpKind::smoothstep;
    fail(ErrorKind::parameter, "unknown bump profile '" + std::string(name) + "' (expected exp or smoothstep)");
}

double bump_value(BumpKind kind, double z) noexcept {
    if (!(z > -1.0 && z < 1.0)) return 0.0;
    if (kind == BumpKind::exp) return std::exp(-1.0 / (1.0 - z * z));
    return smooth_step(z + 0.5) - smooth_step(z - 0.5);
}

// ===========================================================================
// CalderonFrame
// ===========================================================================

double CalderonFrame::phi_hat(double s) const noexcept {
    if (s <= 0.0) return 0.0;
    return bump_value(kind_, std::log2(s)) / c_b_;
}

double CalderonFrame::Phi_hat(double s) const noexcept {
    if (s <= 0.5) return 1.0;
    if (s >= 2.0) return 0.0;
    const double z = std::log2(s);
    const auto& C = *tail_;
    const double pos = (z + 1.0) * 0.5 * kTailIntervals;
    int i = std::clamp(static_cast<int>(pos), 0, kTailIntervals - 1);
    const double h = 2.0 / kTailIntervals;
    const double u = (z - z_of(i)) / h;
    // Cubic Hermite with C' = -b.
    const double d0 = -bump_value(kind_, z_of(i)) * h, d1 = -bump_value(kind_, z_of(i + 1)) * h;
    const double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
    const double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
    const double tail = h00 * C[i] + h10 * d0 + h01 * C[i + 1] + h11 * d1;
    return tail / C[0];
}

std::vector<double> CalderonFrame::phi_multiplier(double t) const {
    std::vector<double> m(radii_.size());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = phi_hat(t * radii_[k]);
    return m;
}

std::vector<double> CalderonFrame::Phi_multiplier() const {
    std::vector<double> m(radii_.size());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = Phi_hat(radii_[k]);
    return m;
}

bool CalderonFrame::node_active(std::size_t k) const noexcept {
    const double top = spec_.dimension == 1 ? spec_.nyquist() : std::sqrt(2.0) * spec_.nyquist();
    return 0.5 / ladder_.t[k] < top;
}

GridFunction CalderonFrame::synthesize_phi_t(double t) const {
    require(t > 0.0 && t <= 1.0, ErrorKind::parameter, "synthesize_phi_t: t must lie in (0, 1]");
    auto m = phi_multiplier(t);
    std::vector<cplx> s(m.begin(), m.end());
    return from_spectrum(spec_, std::move(s), "phi_t");
}

GridFunction CalderonFrame::synthesize_Phi() const {
    auto m = Phi_multiplier();
    std::vector<cplx> s(m.begin(), m.end());
    return from_spectrum(spec_, std::move(s), "Phi");
}

double CalderonFrame::identity_at(double s) const noexcept {
    double acc = Phi_hat(s);
    for (std::size_t k = 0; k < ladder_.size(); ++k) acc += ladder_.w[k] * phi_hat(ladder_.t[k] * s);
    return acc;
}

std::string CalderonFrame::id() const {
    std::ostringstream os;
    os << "frame:" << to_string(kind_) << ":V" << ladder_.octaves << ":J" << ladder_.nodes_per_octave;
    return os.str();
}

CalderonFrame build_resolution_of_unity(const GridSpec& spec, const ScaleLadder& ladder, BumpKind kind) {
    validate_ladder(ladder);
    CalderonFrame f;
    f.spec_ = spec;
    f.ladder_ = ladder;
    f.kind_ = kind;
    f.tail_ = std::make_shared<const std::vector<double>>(tail_table(kind));
    f.c_b_ = std::numbers::ln2 * (*f.tail_)[0];
    f.radii_ = radial_frequencies(spec);
    f.band_ = 0.9 * std::min(std::ldexp(1.0, ladder.octaves - 1), spec.nyquist());

    // Residual over the grid radii inside the band and a dense log-spaced sweep.
    std::vector<double> probe{0.0};
    for (double r : f.radii_)
        if (r <= f.band_) probe.push_back(r);
    std::sort(probe.begin(), probe.end());
    probe.erase(std::unique(probe.begin(), probe.end()), probe.end());
    const int sweep = 4000;
    const double lo = std::log2(0.25), hi = std::log2(f.band_);
    for (int i = 0; i <= sweep; ++i) probe.push_back(std::exp2(lo + (hi - lo) * i / sweep));
    double worst = 0.0;
    for (double s : probe) worst = std::max(worst, std::abs(f.identity_at(s) - 1.0));
    f.residual_ = worst;
    require(worst <= kResidualLimit, ErrorKind::construction,
            "resolution of unity residual " + std::to_string(worst) + " exceeds 1e-6 on the resolved band; "
            "increase the ladder nodes per octave");
    return f;
}

// ===========================================================================
// Local means
// ===========================================================================

double LocalMeanPair::k0_hat(double s) const noexcept { return std::exp(-s * s / (2.0 * eps_ * eps_)); }

double LocalMeanPair::k_hat(double s) const noexcept { return std::pow(s, 2 * m_) * k0_hat(s); }

std::vector<double> LocalMeanPair::k_multiplier(double t) const {
    auto r = radial_frequencies(spec_);
    for (auto& v : r) v = k_hat(t * v);
    return r;
}

std::vector<double> LocalMeanPair::k0_multiplier() const {
    auto r = radial_frequencies(spec_);
    for (auto& v : r) v = k0_hat(v);
    return r;
}

GridFunction LocalMeanPair::k0() const {
    auto m = k0_multiplier();
    return from_spectrum(spec_, std::vector<cplx>(m.begin(), m.end()), "k0");
}

GridFunction LocalMeanPair::k() const {
    auto m = k_multiplier(1.0);
    return from_spectrum(spec_, std::vector<cplx>(m.begin(), m.end()), "k");
}

std::string LocalMeanPair::id() const {
    std::ostringstream os;
    os << "localmean:S" << S_ << ":m" << m_ << ":eps" << eps_;
    return os.str();
}

LocalMeanPair build_local_mean_pair(const GridSpec& spec, int S, double epsilon) {
    require(S >= -1, ErrorKind::parameter, "local means need S >= -1");
    require(epsilon > 0.0 && std::isfinite(epsilon), ErrorKind::parameter, "local means need epsilon > 0");
    LocalMeanPair p;
    p.spec_ = spec;
    p.S_ = S;
    p.m_ = std::max(0, (S + 2) / 2);   // ceil((S + 1) / 2)
    p.eps_ = epsilon;

    auto& c = p.cert_;
    c.k0_min_on_ball = INFINITY;
    c.k_min_on_annulus = INFINITY;
    const int samples = 2000;
    for (int i = 0; i <= samples; ++i) {
        const double s_ball = 2.0 * epsilon * i / samples;
        c.k0_min_on_ball = std::min(c.k0_min_on_ball, std::abs(p.k0_hat(s_ball)));
        const double s_ann = epsilon * (0.5 + 1.5 * i / samples);
        c.k_min_on_annulus = std::min(c.k_min_on_annulus, std::abs(p.k_hat(s_ann)));
    }
    const GridFunction k = p.k();
    for (int beta = 0; beta <= S; ++beta) {
        double mom = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < k.size(); ++i) {
            const double x = spec.point(i)[0];
            const double xb = std::pow(x, beta);
            mom += xb * k[i].real();
            scale += std::abs(xb) * std::abs(k[i]);
        }
        mom *= spec.cell_volume();
        scale *= spec.cell_volume();
        c.moments.push_back(mom);
        c.worst_relative_moment = std::max(c.worst_relative_moment, scale > 0.0 ? std::abs(mom) / scale : 0.0);
    }
    c.pass = c.k0_min_on_ball > 0.0 && c.k_min_on_annulus > 0.0 && c.worst_relative_moment <= 1e-8;
    require(c.pass, ErrorKind::construction, "local mean pair failed its Tauberian or moment certification");
    return p;
}

GridFunction eta_kernel(const GridSpec& spec, double t, double m) {
    require(t > 0.0 && std::isfinite(t), ErrorKind::parameter, "eta kernel needs t > 0");
    require(m > spec.dimension, ErrorKind::parameter, "eta kernel needs m > n for integrability");
    const double scale = std::pow(t, -spec.dimension);
    return GridFunction::sample_real(
        spec,
        [&](const Point& x) {
            const double r = std::hypot(x[0], spec.dimension == 2 ? x[1] : 0.0);
            return scale * std::pow(1.0 + r / t, -m);
        },
        "eta");
}

}  // namespace vbesov
