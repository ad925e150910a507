#include "vbesov/besov.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "vbesov/error.hpp"
#include "vbesov/json_out.hpp"
#include "vbesov/parallel.hpp"
#include "vbesov/simd/kernels.hpp"

namespace vbesov {

namespace {

struct BandPass {
    std::function<std::vector<double>(double)> node;   // multiplier at scale t
    std::vector<double> level0;                        // multiplier of the v = 0 term
    std::function<bool(std::size_t)> active;
};

void check_exponents(const GridFunction& f, const ExponentField& alpha, const ExponentField& p) {
    require(alpha.kind() == ExponentKind::alpha, ErrorKind::parameter, "alpha field has the wrong kind");
    require(p.kind() == ExponentKind::p, ErrorKind::parameter, "p field has the wrong kind");
    require_same_grid(f.spec(), alpha.grid(), "alpha");
    require_same_grid(f.spec(), p.grid(), "p");
}

GridFunction band(const GridSpec& spec, const std::vector<cplx>& fhat, const std::vector<double>& m) {
    std::vector<cplx> s(fhat.size());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = fhat[k] * m[k];
    return from_spectrum(spec, std::move(s));
}

double lux_of(const std::vector<double>& mag, const ExponentField& p, double cell) {
    std::vector<double> meas(mag.size(), cell);
    return luxemburg(WeightedSamples{mag, p.samples(), meas}).value;
}

ScaleProfile compute_profile(const GridFunction& f, const ScaleLadder& ladder, const BandPass& bp,
                             const ExponentField& alpha, const ExponentField& p, std::optional<double> a) {
    check_exponents(f, alpha, p);
    const auto& spec = f.spec();
    const double cell = spec.cell_volume();
    ScaleProfile prof;
    prof.t = ladder.t;
    prof.values.assign(ladder.size(), 0.0);
    const auto fhat = spectrum(f);

    {
        const GridFunction u0 = band(spec, fhat, bp.level0);
        auto g = u0.magnitude();
        if (a) g = peetre_maximal(spec, g, 1.0, *a);
        prof.level0 = lux_of(g, p, cell);
    }

    parallel_for(ladder.size(), [&](std::size_t k) {
        if (!bp.active(k)) return;
        const double t = ladder.t[k];
        const auto m = bp.node(t);
        if (std::all_of(m.begin(), m.end(), [](double v) { return v == 0.0; })) return;
        const GridFunction u = band(spec, fhat, m);
        const double lt = std::log(t);
        std::vector<double> g(u.size());
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::abs(u[i]) * std::exp(-alpha[i] * lt);
        if (a) g = peetre_maximal(spec, g, t, *a);
        prof.values[k] = lux_of(g, p, cell);
    });
    return prof;
}

BesovNormReport assemble(NormForm form, ScaleProfile prof, const ExponentField& alpha, const ExponentField& p,
                         const ExponentField& q, const ScaleLadder& ladder, std::string kernel) {
    BesovNormReport r;
    r.form = form;
    r.kernel_id = std::move(kernel);
    r.alpha_label = alpha.label();
    r.p_label = p.label();
    r.q_label = q.label();
    switch (form) {
        case NormForm::discretized:
            r.t_part = octave_block_norm(prof.values, q, ladder);
            break;
        case NormForm::q0:
            r.t_part = t_norm(prof.values, q, ladder, TNormForm::q0);
            break;
        default:
            r.t_part = t_norm(prof.values, q, ladder, TNormForm::variable);
    }
    r.value = prof.level0 + r.t_part.value;
    r.profile = std::move(prof);
    return r;
}

void peetre_warning(BesovNormReport& r, const GridSpec& spec, const ExponentField& p, double a) {
    if (!(a > spec.dimension / p.min()))
        r.warnings.push_back("Peetre parameter a = " + short_number(a) + " does not exceed n/p- = " +
                             short_number(spec.dimension / p.min()));
}

}  // namespace

std::string_view to_string(NormForm form) noexcept {
    switch (form) {
        case NormForm::direct: return "direct";
        case NormForm::discretized: return "discretized";
        case NormForm::q0: return "q0";
        case NormForm::peetre: return "peetre";
        case NormForm::local_mean_prime: return "local_mean_prime";
        case NormForm::local_mean_double_prime: return "local_mean_double_prime";
    }
    return "unknown";
}

NormForm parse_norm_form(std::string_view name) {
    for (NormForm f : {NormForm::direct, NormForm::discretized, NormForm::q0, NormForm::peetre,
                       NormForm::local_mean_prime, NormForm::local_mean_double_prime})
        if (name == to_string(f)) return f;
    fail(ErrorKind::parameter, "unknown norm form '" + std::string(name) + "'");
}

nlohmann::json BesovNormReport::to_json() const {
    nlohmann::json j;
    j["form"] = std::string(to_string(form));
    j["value"] = value;
    j["level0"] = profile.level0;
    j["profile"] = {{"t", profile.t}, {"values", profile.values}};
    j["t_part"] = {{"value", t_part.value},
                   {"modular_at_value", t_part.modular_at_value},
                   {"iterations", t_part.iterations},
                   {"bracket", {t_part.bracket_lo, t_part.bracket_hi}}};
    j["kernel"] = kernel_id;
    j["alpha"] = alpha_label;
    j["p"] = p_label;
    j["q"] = q_label;
    j["a"] = peetre_a ? nlohmann::json(*peetre_a) : nlohmann::json(nullptr);
    j["warnings"] = warnings;
    return j;
}

ExponentField q_on_ladder(const ScaleLadder& ladder, const std::function<double(double)>& q, double q_zero,
                          std::string label) {
    return ExponentField::sample_on_t_axis(ladder.t, q, q_zero, std::move(label));
}

ScaleProfile lp_profile(const GridFunction& f, const CalderonFrame& frame, const ExponentField& alpha,
                        const ExponentField& p) {
    require_same_grid(f.spec(), frame.spec(), "lp_profile");
    BandPass bp{[&](double t) { return frame.phi_multiplier(t); }, frame.Phi_multiplier(),
                [&](std::size_t k) { return frame.node_active(k); }};
    return compute_profile(f, frame.ladder(), bp, alpha, p, std::nullopt);
}

BesovNormReport besov_norm(const GridFunction& f, const CalderonFrame& frame, const ExponentField& alpha,
                           const ExponentField& p, const ExponentField& q, NormForm form) {
    require(form == NormForm::direct || form == NormForm::discretized || form == NormForm::q0,
            ErrorKind::parameter, "besov_norm computes the direct, discretized and q0 forms");
    if (form != NormForm::q0)
        require(std::isfinite(q.max()), ErrorKind::unsupported, "q+ = infinity is only available through t_norm sup");
    return assemble(form, lp_profile(f, frame, alpha, p), alpha, p, q, frame.ladder(), frame.id());
}

double norm_from_profile(const ScaleProfile& profile, const ExponentField& q, const ScaleLadder& ladder,
                         NormForm form) {
    require(profile.values.size() == ladder.size(), ErrorKind::grid_mismatch,
            "norm_from_profile: profile and ladder differ in length");
    switch (form) {
        case NormForm::discretized: return profile.level0 + octave_block_norm(profile.values, q, ladder).value;
        case NormForm::q0: return profile.level0 + t_norm(profile.values, q, ladder, TNormForm::q0).value;
        default: return profile.level0 + t_norm(profile.values, q, ladder, TNormForm::variable).value;
    }
}

// ===========================================================================
// Peetre maximal functions
// ===========================================================================

std::vector<double> peetre_maximal(const GridSpec& spec, std::span<const double> g, double t, double a) {
    require(g.size() == spec.total(), ErrorKind::grid_mismatch, "peetre_maximal: size mismatch");
    require(t > 0.0 && a >= 0.0, ErrorKind::parameter, "peetre_maximal: need t > 0 and a >= 0");
    const auto& kern = simd::kernels();
    const int N = spec.points;
    const double h = spec.spacing();
    auto dist = [N](int j) { return std::min(j, N - j); };
    std::vector<double> out(g.size(), 0.0);

    // Blocks of B samples; a block is skipped when its largest value times the
    // damping at its nearest point cannot beat the running maximum.  Skipped
    // products are all <= that bound, so the result equals the full scan.
    // The running maximum starts from a lower bound taken from the previous
    // point, out(x) >= out(x - h) (1 + h/t)^{-a}, shrunk so that rounding
    // cannot lift it above the true value.
    const double carry = std::pow(1.0 + h / t, -a) * (1.0 - 1e-12);
    const int B = std::min(64, N);
    const int nb = N / B;
    const int mask = N - 1;   // N is a power of two
    auto block_gap = [&](int i, int b) {
        const int lo = b * B, hi = lo + B - 1;
        if (i >= lo && i <= hi) return 0;
        return std::min((i - hi) & mask, (lo - i) & mask);
    };
    // damping by circular index distance, only N/2 + 1 distinct values
    auto damping_row = [&](double offset2, std::vector<double>& row) {
        std::vector<double> d(N / 2 + 1);
        for (int j = 0; j <= N / 2; ++j) d[j] = std::pow(1.0 + std::sqrt(offset2 + double(j) * j) * h / t, -a);
        row.resize(2 * static_cast<std::size_t>(N));
        for (int m = 0; m < 2 * N; ++m) row[m] = d[dist(m & mask)];
    };

    if (spec.dimension == 1) {
        // out[i] = max_j g[j] damp((i - j) mod N); with G reversed, the damping
        // index runs contiguously through a doubled table.
        std::vector<double> E;
        damping_row(0.0, E);
        std::vector<double> G(g.rbegin(), g.rend());
        std::vector<double> bmax(nb, 0.0);
        for (int j = 0; j < N; ++j) bmax[j / B] = std::max(bmax[j / B], g[j]);
        const double gmax = *std::max_element(bmax.begin(), bmax.end());
        for (int i = 0; i < N; ++i) {
            const int own = i / B;
            const double floor = i > 0 ? out[i - 1] * carry : 0.0;
            double best = 0.0;
            for (int s = 0; s < nb; ++s) {
                // Blocks after the pair own +- k lie at least k B away.
                if (s % 2 == 1 && gmax * E[std::min(s / 2 * B, N / 2)] <= std::max(best, floor)) break;
                const int b = (own + (s % 2 ? (s + 1) / 2 : nb - s / 2)) % nb;
                if (s > 0 && bmax[b] * E[block_gap(i, b)] <= std::max(best, floor)) continue;
                const int j0 = N - (b + 1) * B;   // reversed start of block b
                best = std::max(best, kern.max_product(G.data() + j0, E.data() + i + 1 + j0, B));
            }
            out[i] = best;
        }
        return out;
    }

    const int half = N / 2;
    std::vector<std::vector<double>> E(half + 1);
    for (int d1 = 0; d1 <= half; ++d1) damping_row(double(d1) * d1, E[d1]);
    std::vector<std::vector<double>> rows(N);
    std::vector<std::vector<double>> bmax(N, std::vector<double>(nb, 0.0));
    for (int j1 = 0; j1 < N; ++j1) {
        rows[j1].assign(N, 0.0);
        for (int j2 = 0; j2 < N; ++j2) {
            const double v = g[spec.flat(j1, j2)];
            rows[j1][N - 1 - j2] = v;
            bmax[j1][j2 / B] = std::max(bmax[j1][j2 / B], v);
        }
    }
    std::vector<double> rmax(N, 0.0);
    for (int j1 = 0; j1 < N; ++j1) rmax[j1] = *std::max_element(bmax[j1].begin(), bmax[j1].end());
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t ii) {
        const int i1 = static_cast<int>(ii);
        for (int i2 = 0; i2 < N; ++i2) {
            const int own = i2 / B;
            const double floor = i2 > 0 ? out[spec.flat(i1, i2 - 1)] * carry : 0.0;
            double best = 0.0;
            for (int r = 0; r < N; ++r) {
                const int j1 = (i1 + (r % 2 ? (r + 1) / 2 : N - r / 2)) % N;
                const auto& Ed = E[dist((i1 - j1) & mask)];
                if (r > 0 && rmax[j1] * Ed[0] <= std::max(best, floor)) continue;
                for (int s = 0; s < nb; ++s) {
                    const int b = (own + (s % 2 ? (s + 1) / 2 : nb - s / 2)) % nb;
                    if (bmax[j1][b] * Ed[block_gap(i2, b)] <= std::max(best, floor)) continue;
                    const int j0 = N - (b + 1) * B;
                    best = std::max(best, kern.max_product(rows[j1].data() + j0, Ed.data() + i2 + 1 + j0, B));
                }
            }
            out[spec.flat(i1, i2)] = best;
        }
    });
    return out;
}

ScaleProfile peetre_profile(const GridFunction& f, const CalderonFrame& frame, const ExponentField& alpha,
                            const ExponentField& p, double a) {
    require_same_grid(f.spec(), frame.spec(), "peetre_profile");
    BandPass bp{[&](double t) { return frame.phi_multiplier(t); }, frame.Phi_multiplier(),
                [&](std::size_t k) { return frame.node_active(k); }};
    return compute_profile(f, frame.ladder(), bp, alpha, p, a);
}

BesovNormReport peetre_norm(const GridFunction& f, const CalderonFrame& frame, const ExponentField& alpha,
                            const ExponentField& p, const ExponentField& q, double a) {
    auto r = assemble(NormForm::peetre, peetre_profile(f, frame, alpha, p, a), alpha, p, q, frame.ladder(),
                      frame.id());
    r.peetre_a = a;
    peetre_warning(r, f.spec(), p, a);
    return r;
}

// ===========================================================================
// Local means
// ===========================================================================

BesovNormReport local_mean_norm(const GridFunction& f, const LocalMeanPair& pair, const ScaleLadder& ladder,
                                const ExponentField& alpha, const ExponentField& p, const ExponentField& q,
                                double a, LocalMeanVariant variant) {
    require_same_grid(f.spec(), pair.spec(), "local_mean_norm");
    require(alpha.max() < pair.S() + 1, ErrorKind::hypothesis,
            "local means need alpha+ < S + 1, got alpha+ = " + short_number(alpha.max()) +
                " and S = " + std::to_string(pair.S()));
    BandPass bp{[&](double t) { return pair.k_multiplier(t); }, pair.k0_multiplier(),
                [](std::size_t) { return true; }};
    const bool prime = variant == LocalMeanVariant::prime;
    auto prof = compute_profile(f, ladder, bp, alpha, p, prime ? std::optional<double>(a) : std::nullopt);
    auto r = assemble(prime ? NormForm::local_mean_prime : NormForm::local_mean_double_prime, std::move(prof),
                      alpha, p, q, ladder, pair.id());
    if (prime) {
        r.peetre_a = a;
        peetre_warning(r, f.spec(), p, a);
    }
    return r;
}

// ===========================================================================
// Octave-block (discretised) t-norm
// ===========================================================================

NormResult octave_block_norm(std::span<const double> g, const ExponentField& q, const ScaleLadder& ladder) {
    require(g.size() == ladder.size(), ErrorKind::grid_mismatch, "octave_block_norm: profile length differs");
    require(q.on_t_axis() && q.t_nodes() == ladder.t, ErrorKind::grid_mismatch,
            "octave_block_norm: q is not sampled on the ladder nodes");
    require(std::isfinite(q.max()), ErrorKind::unsupported, "octave blocks with q+ = infinity are not supported");
    std::vector<MixedBlock> blocks;
    for (int v = 1; v <= ladder.octaves; ++v) {
        MixedBlock b;
        for (std::size_t k = ladder.octave_begin(v); k < ladder.octave_end(v); ++k) {
            const double t = ladder.t[k];
            const double qt = q[k];
            const double val = std::abs(g[k]);
            b.log_magnitude.push_back(val > 0.0 ? std::log(val) - std::log(t) / qt : -INFINITY);
            b.exponent.push_back(qt);
            b.measure.push_back(ladder.w[k] * t);   // dt = t * (dt/t)
        }
        b.q = q.value_at_t(octave_midpoint(v));
        blocks.push_back(std::move(b));
    }
    return mixed_norm(blocks);
}

void write_profile_csv(const std::filesystem::path& path, const ScaleProfile& profile) {
    std::ofstream os(path);
    require(static_cast<bool>(os), ErrorKind::io, "cannot open " + path.string());
    os << "t,value\n";
    os << "0," << format_number(profile.level0) << "\n";
    for (std::size_t k = 0; k < profile.t.size(); ++k)
        os << format_number(profile.t[k]) << ',' << format_number(profile.values[k]) << '\n';
}

}  // namespace vbesov
