#include "vbesov/lebesgue.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vbesov/error.hpp"
#include "vbesov/simd/kernels.hpp"

namespace vbesov {

namespace {

constexpr double kRelTol = 1e-10;
constexpr int kMaxIter = 200;

struct Active {
    std::vector<double> logmag, expo, meas;
    double shift = 0.0;   // log of the largest magnitude, removed from logmag
    double p_min = INFINITY, p_max = 0.0;
};

Active compact(std::span<const double> log_magnitude, std::span<const double> exponent,
               std::span<const double> measure) {
    require(log_magnitude.size() == exponent.size() && exponent.size() == measure.size(),
            ErrorKind::grid_mismatch, "Luxemburg inputs differ in length");
    Active a;
    double top = -INFINITY;
    for (std::size_t i = 0; i < log_magnitude.size(); ++i) {
        require(!std::isnan(log_magnitude[i]) && log_magnitude[i] < INFINITY, ErrorKind::parameter,
                "Luxemburg input must be finite");
        require(exponent[i] > 0.0 && std::isfinite(exponent[i]), ErrorKind::admissibility,
                "Luxemburg exponent must be positive and finite");
        require(measure[i] >= 0.0 && std::isfinite(measure[i]), ErrorKind::parameter,
                "Luxemburg measure must be non-negative");
        if (measure[i] == 0.0 || log_magnitude[i] == -INFINITY) continue;
        a.logmag.push_back(log_magnitude[i]);
        a.expo.push_back(exponent[i]);
        a.meas.push_back(measure[i]);
        top = std::max(top, log_magnitude[i]);
        a.p_min = std::min(a.p_min, exponent[i]);
        a.p_max = std::max(a.p_max, exponent[i]);
    }
    if (!a.logmag.empty()) {
        a.shift = top;
        for (auto& v : a.logmag) v -= top;
    }
    return a;
}

double rho(const Active& a, double log_lambda) {
    return simd::kernels().modular_sum(a.logmag.data(), a.expo.data(), a.meas.data(), a.logmag.size(),
                                       log_lambda);
}

NormResult solve(const Active& a) {
    NormResult r;
    if (a.logmag.empty()) return r;
    const double R = rho(a, 0.0);
    double lo = std::min(std::pow(R, 1.0 / a.p_min), std::pow(R, 1.0 / a.p_max));
    double hi = std::max(std::pow(R, 1.0 / a.p_min), std::pow(R, 1.0 / a.p_max));
    // Guard the bracket against rounding in the modular sum.
    for (int k = 0; k < 64 && rho(a, std::log(hi)) > 1.0; ++k) hi *= 1.0 + 1e-12 * (1 << std::min(k, 30));
    for (int k = 0; k < 64 && lo > 0.0 && rho(a, std::log(lo)) <= 1.0; ++k) lo *= 1.0 - 1e-12 * (1 << std::min(k, 30));
    r.bracket_lo = lo * std::exp(a.shift);
    r.bracket_hi = hi * std::exp(a.shift);
    // Regula falsi on u -> log rho(e^u), which is convex and close to linear.
    // Each secant point is followed by a probe half a tolerance beyond it, so
    // an accurate secant closes the bracket at once; a step that does not
    // halve the bracket is followed by bisection.  Invariant:
    // rho(e^ua) > 1 >= rho(e^ub).
    int it = 0;
    if (lo > 0.0) {
        double ua = std::log(lo), ub = std::log(hi);
        double ga = std::log(rho(a, ua)), gb = std::log(rho(a, ub));
        const double width = -std::log1p(-kRelTol);
        auto visit = [&](double u) {
            const double gu = std::log(rho(a, u));
            if (gu <= 0.0) {
                ub = u;
                gb = gu;
            } else {
                ua = u;
                ga = gu;
            }
            ++it;
            return gu <= 0.0;
        };
        bool bisect = false;
        while (ub - ua > width && it < kMaxIter) {
            const double before = ub - ua;
            if (bisect || !(ga > gb) || !std::isfinite(ga - gb)) {
                visit(0.5 * (ua + ub));
                bisect = false;
                continue;
            }
            const double u = std::clamp(ub - gb * (ub - ua) / (gb - ga), ua + 0.25 * width, ub - 0.25 * width);
            const double probe = visit(u) ? u - 0.5 * width : u + 0.5 * width;
            if (probe > ua && probe < ub && ub - ua > width) visit(probe);
            bisect = ub - ua > 0.5 * before;
        }
        lo = std::exp(ua);
        hi = std::exp(ub);
    }
    while (hi - lo > kRelTol * hi && it < kMaxIter) {
        const double mid = 0.5 * (lo + hi);
        if (rho(a, std::log(mid)) <= 1.0) hi = mid;
        else lo = mid;
        ++it;
    }
    r.iterations = it;
    r.modular_at_value = rho(a, std::log(hi));
    r.value = hi * std::exp(a.shift);
    return r;
}

std::vector<double> measure_of(const GridSpec& spec, std::span<const double> weight) {
    std::vector<double> m(spec.total(), spec.cell_volume());
    if (!weight.empty()) {
        require(weight.size() == m.size(), ErrorKind::grid_mismatch, "weight size does not match the grid");
        for (std::size_t i = 0; i < m.size(); ++i) {
            require(weight[i] >= 0.0 && std::isfinite(weight[i]), ErrorKind::parameter,
                    "weight must be non-negative and finite");
            m[i] *= weight[i];
        }
    }
    return m;
}

std::vector<double> log_abs(const GridFunction& f) {
    std::vector<double> l(f.size());
    for (std::size_t i = 0; i < l.size(); ++i) {
        const double a = std::abs(f[i]);
        l[i] = a > 0.0 ? std::log(a) : -INFINITY;
    }
    return l;
}

void require_p_on(const GridFunction& f, const ExponentField& p) {
    require(!p.on_t_axis(), ErrorKind::parameter, "spatial norm needs a spatial exponent");
    require(p.kind() == ExponentKind::p, ErrorKind::parameter, "exponent field is not of kind p");
    require_same_grid(f.spec(), p.grid(), "luxemburg_norm");
}

}  // namespace

double modular_value(const WeightedSamples& s, double lambda) {
    require(lambda > 0.0, ErrorKind::parameter, "modular_value: lambda must be positive");
    std::vector<double> l(s.magnitude.size());
    for (std::size_t i = 0; i < l.size(); ++i) l[i] = s.magnitude[i] > 0.0 ? std::log(s.magnitude[i]) : -INFINITY;
    Active a = compact(l, s.exponent, s.measure);
    if (a.logmag.empty()) return 0.0;
    return rho(a, std::log(lambda) - a.shift);
}

NormResult luxemburg(const WeightedSamples& s) {
    std::vector<double> l(s.magnitude.size());
    for (std::size_t i = 0; i < l.size(); ++i) {
        require(s.magnitude[i] >= 0.0, ErrorKind::parameter, "Luxemburg magnitudes must be non-negative");
        l[i] = s.magnitude[i] > 0.0 ? std::log(s.magnitude[i]) : -INFINITY;
    }
    return luxemburg_log(l, s.exponent, s.measure);
}

NormResult luxemburg_log(std::span<const double> log_magnitude, std::span<const double> exponent,
                         std::span<const double> measure) {
    return solve(compact(log_magnitude, exponent, measure));
}

double modular(const GridFunction& f, const ExponentField& p, std::span<const double> weight) {
    require_p_on(f, p);
    const auto m = measure_of(f.spec(), weight);
    const auto l = log_abs(f);
    Active a = compact(l, p.samples(), m);
    if (a.logmag.empty()) return 0.0;
    return rho(a, -a.shift);
}

NormResult luxemburg_norm(const GridFunction& f, const ExponentField& p, std::span<const double> weight) {
    require_p_on(f, p);
    const auto m = measure_of(f.spec(), weight);
    const auto l = log_abs(f);
    return luxemburg_log(l, p.samples(), m);
}

NormResult mixed_norm(const std::vector<MixedBlock>& blocks) {
    std::vector<double> outer_log, outer_q, outer_w;
    for (const auto& b : blocks) {
        require(b.q > 0.0, ErrorKind::admissibility, "mixed norm: block exponent must be positive");
        require(std::isfinite(b.q), ErrorKind::unsupported, "mixed norm with q = infinity is not supported");
        std::vector<double> lm(b.log_magnitude.size()), ex(b.exponent.size());
        require(lm.size() == ex.size(), ErrorKind::grid_mismatch, "mixed norm block arrays differ in length");
        for (std::size_t i = 0; i < lm.size(); ++i) {
            lm[i] = b.q * b.log_magnitude[i];
            ex[i] = b.exponent[i] / b.q;
        }
        const NormResult inner = luxemburg_log(lm, ex, b.measure);
        // mu^(-q_v) * inner_v  ==  (inner_v^(1/q_v) / mu)^(q_v)
        outer_log.push_back(inner.value > 0.0 ? std::log(inner.value) / b.q : -INFINITY);
        outer_q.push_back(b.q);
        outer_w.push_back(1.0);
    }
    return luxemburg_log(outer_log, outer_q, outer_w);
}

double octave_midpoint(int v) noexcept { return 3.0 * std::ldexp(1.0, -v - 1); }

NormResult mixed_sequence_norm(const std::vector<GridFunction>& fs, const ExponentField& p,
                               const ExponentField& q, std::span<const double> weight) {
    require(q.on_t_axis(), ErrorKind::parameter, "mixed_sequence_norm: q must be a q(t) field");
    if (fs.empty()) return {};
    std::vector<MixedBlock> blocks;
    blocks.reserve(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) {
        require_p_on(fs[i], p);
        const int v = static_cast<int>(i) + 1;
        MixedBlock b;
        b.log_magnitude = log_abs(fs[i]);
        b.exponent = p.samples();
        b.measure = measure_of(fs[i].spec(), weight);
        b.q = q.value_at_t(octave_midpoint(v));
        blocks.push_back(std::move(b));
    }
    return mixed_norm(blocks);
}

std::string_view to_string(TNormForm form) noexcept {
    switch (form) {
        case TNormForm::variable: return "variable";
        case TNormForm::q0: return "q0";
        case TNormForm::sup: return "sup";
    }
    return "unknown";
}

NormResult t_norm(std::span<const double> g, const ExponentField& q, const ScaleLadder& ladder, TNormForm form) {
    require(q.on_t_axis(), ErrorKind::parameter, "t_norm: q must be a q(t) field");
    require(g.size() == ladder.size(), ErrorKind::grid_mismatch, "t_norm: profile length differs from the ladder");
    require(q.t_nodes() == ladder.t, ErrorKind::grid_mismatch, "t_norm: q is not sampled on the ladder nodes");
    for (double v : g) require(std::isfinite(v), ErrorKind::parameter, "t_norm: profile must be finite");
    NormResult r;
    if (form == TNormForm::sup || (form == TNormForm::q0 && std::isinf(*q.limit()))) {
        for (double v : g) r.value = std::max(r.value, std::abs(v));
        r.bracket_lo = r.bracket_hi = r.value;
        return r;
    }
    if (form == TNormForm::q0) {
        const double q0 = *q.limit();
        double s = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) s += ladder.w[k] * std::pow(std::abs(g[k]), q0);
        r.value = std::pow(s, 1.0 / q0);
        r.modular_at_value = s > 0.0 ? 1.0 : 0.0;
        r.bracket_lo = r.bracket_hi = r.value;
        return r;
    }
    require(std::isfinite(q.max()), ErrorKind::unsupported, "variable t-norm with q+ = infinity is not supported");
    std::vector<double> mag(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) mag[k] = std::abs(g[k]);
    return luxemburg(WeightedSamples{mag, q.samples(), ladder.w});
}

}  // namespace vbesov
