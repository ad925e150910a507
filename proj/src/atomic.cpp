#include "vbesov/atomic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vbesov/besov.hpp"
#include "vbesov/error.hpp"
#include "vbesov/grid_io.hpp"
#include "vbesov/json_out.hpp"
#include "vbesov/parallel.hpp"

namespace vbesov {

namespace detail {

struct CanonicalAtoms {
    CalderonFrame frame;
    GridFunction source;
    std::vector<cplx> fhat;
    std::vector<double> Psi;                     // sqrt(F Phi) at the bins
    std::map<DyadicCube, double> lambda;         // coefficients as analysed
    std::vector<CubePartition> parts;            // levels 0..V
    int V = 0;

    std::vector<double> psi(double t) const {
        auto m = frame.phi_multiplier(t);
        for (double& x : m) x = std::sqrt(std::max(x, 0.0));
        return m;
    }

    GridFunction band(const std::vector<double>& m) const {
        std::vector<cplx> s(fhat.size());
        for (std::size_t k = 0; k < s.size(); ++k) s[k] = fhat[k] * m[k];
        return from_spectrum(frame.spec(), std::move(s));
    }

    bool node_used(std::size_t k) const {
        return frame.ladder().octave[k] <= V && frame.node_active(k);
    }

    // Spectrum of sum_m s_m int_{octave v} phi_syn,t * (chi_m psi_t * f) dt/t
    // (level 0 with Phi_syn and Psi), where s is given per grid point.
    std::vector<cplx> level_spectrum(int v, const std::vector<double>& scale) const {
        const auto& spec = frame.spec();
        std::vector<cplx> acc(fhat.size(), cplx{});
        auto add = [&](const std::vector<double>& m, double w) {
            GridFunction g = band(m);
            std::vector<cplx> masked(g.size());
            for (std::size_t i = 0; i < masked.size(); ++i) masked[i] = g[i] * scale[i];
            const auto s = spectrum(GridFunction(spec, std::move(masked)));
            for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w * m[k] * s[k];
        };
        if (v == 0) {
            add(Psi, 1.0);
            return acc;
        }
        const auto& lad = frame.ladder();
        for (std::size_t k = lad.octave_begin(v); k < lad.octave_end(v); ++k)
            if (node_used(k)) add(psi(lad.t[k]), lad.w[k]);
        return acc;
    }
};

}  // namespace detail

// ===========================================================================
// Validation
// ===========================================================================

std::vector<MultiIndex> multi_indices(int dimension, int order) {
    std::vector<MultiIndex> out;
    for (int total = 0; total <= order; ++total) {
        if (dimension == 1) {
            out.push_back({total, 0});
            continue;
        }
        for (int a = total; a >= 0; --a) out.push_back({a, total - a});
    }
    return out;
}

nlohmann::json AtomDescriptor::to_json() const {
    nlohmann::json j;
    j["v"] = cube.level;
    j["m"] = {cube.index[0], cube.index[1]};
    j["K"] = K;
    j["L"] = L;
    j["gamma"] = gamma;
    j["support_leak"] = support_leak;
    j["gamma_effective"] = gamma_effective;
    j["gamma_one_percent"] = gamma_one_percent;
    j["support_pass"] = support_pass;
    j["derivative_constant"] = derivative_constant;
    j["derivative_pass"] = derivative_pass;
    j["moments_checked"] = moments_checked;
    j["moment_pass"] = moment_pass;
    j["pass"] = pass;
    auto& d = j["derivatives"] = nlohmann::json::array();
    for (const auto& m : derivatives)
        d.push_back({{"beta", {m.beta[0], m.beta[1]}}, {"sup", m.sup}, {"bound", m.bound}, {"ratio", m.ratio}});
    auto& mo = j["moments"] = nlohmann::json::array();
    for (const auto& m : moments)
        mo.push_back({{"beta", {m.beta[0], m.beta[1]}}, {"value", m.value}, {"bound", m.bound}});
    return j;
}

AtomDescriptor validate_atom(const GridFunction& a, const DyadicCube& cube, int K, int L, double gamma) {
    require(K >= 0, ErrorKind::parameter, "validate_atom: K must be >= 0");
    require(L >= -1, ErrorKind::parameter, "validate_atom: L must be >= -1");
    require(gamma > 1.0, ErrorKind::parameter, "validate_atom: gamma must exceed 1");
    const auto& spec = a.spec();
    const int n = spec.dimension;
    const int v = cube.level;
    AtomDescriptor d;
    d.cube = cube;
    d.K = K;
    d.L = L;
    d.gamma = gamma;

    // Support: scaled sup-distance r(x) = 2 |x - x_Q|_inf / side; x lies in gamma Q iff r <= gamma.
    const Point c = cube.center();
    const double side = cube.side();
    std::vector<std::pair<double, double>> rm(a.size());
    double mass = 0.0, outside = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Point disp = periodic_displacement(spec, spec.point(i), c);
        double r = 0.0;
        for (int k = 0; k < n; ++k) r = std::max(r, 2.0 * std::abs(disp[k]) / side);
        const double m = std::abs(a[i]);
        rm[i] = {r, m};
        mass += m;
        if (r > gamma) outside += m;
    }
    if (mass > 0.0) {
        d.support_leak = outside / mass;
        std::sort(rm.begin(), rm.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
        auto radius = [&](double tol) {
            double acc = 0.0;
            for (const auto& [r, m] : rm) {
                acc += m;
                if (acc > tol * mass) return r;
            }
            return 0.0;
        };
        d.gamma_effective = radius(kSupportTolerance);
        d.gamma_one_percent = radius(1e-2);
    }
    d.support_pass = d.support_leak <= kSupportTolerance;

    for (const MultiIndex& beta : multi_indices(n, K)) {
        const int order = beta[0] + beta[1];
        DerivativeMargin m;
        m.beta = beta;
        m.sup = order == 0 ? a.max_abs() : spectral_derivative(a, beta).max_abs();
        m.bound = std::pow(2.0, v * (order + 0.5 * n));
        m.ratio = m.sup / m.bound;
        d.derivative_constant = std::max(d.derivative_constant, m.ratio);
        d.derivatives.push_back(m);
    }
    d.derivative_pass = d.derivative_constant <= 1.0 + kDerivativeSlack;

    d.moments_checked = v >= 1 && L >= 0;
    if (d.moments_checked) {
        for (const MultiIndex& beta : multi_indices(n, L)) {
            const int order = beta[0] + beta[1];
            cplx acc{};
            for (std::size_t i = 0; i < a.size(); ++i) {
                const Point disp = periodic_displacement(spec, spec.point(i), c);
                double w = std::pow(disp[0], beta[0]);
                if (n == 2) w *= std::pow(disp[1], beta[1]);
                acc += w * a[i];
            }
            MomentMargin m;
            m.beta = beta;
            m.value = std::abs(acc) * spec.cell_volume();
            m.bound = kMomentTolerance * std::pow(2.0, -v * (0.5 * n + order));
            if (m.value > m.bound) d.moment_pass = false;
            d.moments.push_back(m);
        }
    }
    d.pass = d.support_pass && d.derivative_pass && d.moment_pass;
    return d;
}

// ===========================================================================
// Decomposition container
// ===========================================================================

AtomicDecomposition::AtomicDecomposition(GridSpec spec, ScaleLadder ladder, int V, int K, int L, double gamma)
    : spec_(spec), ladder_(std::move(ladder)), V_(V), K_(K), L_(L), gamma_(gamma) {
    require(V >= 0 && V <= ladder_.octaves, ErrorKind::parameter, "decomposition depth V must lie in [0, octaves]");
    require(K >= 0 && L >= -1 && gamma > 1.0, ErrorKind::parameter, "atom parameters need K >= 0, L >= -1, gamma > 1");
}

double AtomicDecomposition::coefficient(const DyadicCube& cube) const {
    auto it = coefficients_.find(cube);
    return it == coefficients_.end() ? 0.0 : it->second;
}

void AtomicDecomposition::set_coefficient(const DyadicCube& cube, double lambda) {
    require(std::isfinite(lambda) && lambda >= 0.0, ErrorKind::parameter, "coefficients must be finite and >= 0");
    require(cube.level >= 0 && cube.level <= V_, ErrorKind::parameter, "coefficient level outside 0..V");
    coefficients_[cube] = lambda;
}

void AtomicDecomposition::set_atom(const DyadicCube& cube, GridFunction atom) {
    require_same_grid(spec_, atom.spec(), "set_atom");
    require(cube.level >= 0 && cube.level <= V_, ErrorKind::parameter, "atom level outside 0..V");
    explicit_atoms_.insert_or_assign(cube, std::move(atom));
}

bool AtomicDecomposition::has_atom(const DyadicCube& cube) const {
    return explicit_atoms_.contains(cube) || (canonical_ && canonical_->lambda.contains(cube));
}

GridFunction AtomicDecomposition::atom(const DyadicCube& cube) const {
    if (auto it = explicit_atoms_.find(cube); it != explicit_atoms_.end()) return it->second;
    require(canonical_ && canonical_->lambda.contains(cube), ErrorKind::parameter,
            "no atom stored for cube (" + std::to_string(cube.level) + ", " + std::to_string(cube.index[0]) + ")");
    const double lam = canonical_->lambda.at(cube);
    if (lam == 0.0) return GridFunction::zeros(spec_);
    const auto& part = canonical_->parts[cube.level];
    const auto pos = std::lower_bound(part.cubes.begin(), part.cubes.end(), cube) - part.cubes.begin();
    std::vector<double> mask(spec_.total(), 0.0);
    for (std::size_t i : part.members[pos]) mask[i] = 1.0;
    auto s = canonical_->level_spectrum(cube.level, mask);
    for (auto& x : s) x /= lam;
    return from_spectrum(spec_, std::move(s), "atom");
}

std::vector<double> AtomicDecomposition::level_step_function(int v) const {
    require(v >= 0 && v <= V_, ErrorKind::parameter, "level outside 0..V");
    std::vector<double> u(spec_.total(), 0.0);
    const CubePartition part = partition_cubes(spec_, v);
    for (std::size_t c = 0; c < part.cubes.size(); ++c) {
        const double lam = coefficient(part.cubes[c]);
        if (lam == 0.0) continue;
        for (std::size_t i : part.members[c]) u[i] = lam;
    }
    return u;
}

std::vector<std::pair<DyadicCube, double>> AtomicDecomposition::ranked(int v) const {
    std::vector<std::pair<DyadicCube, double>> out;
    for (const auto& [c, lam] : coefficients_)
        if (c.level == v && lam > 0.0) out.emplace_back(c, lam);
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return out;
}

// ===========================================================================
// Analysis and synthesis
// ===========================================================================

double measure_C_phi(const CalderonFrame& frame, int K) {
    require(K >= 0, ErrorKind::parameter, "measure_C_phi: K must be >= 0");
    const auto& spec = frame.spec();
    auto kernel = [&](std::vector<double> m) {
        for (double& x : m) x = std::sqrt(std::max(x, 0.0));
        return from_spectrum(spec, std::vector<cplx>(m.begin(), m.end()));
    };
    const GridFunction phi = kernel(frame.phi_multiplier(1.0));
    const GridFunction Phi = kernel(frame.Phi_multiplier());
    double c = 0.0;
    for (const MultiIndex& beta : multi_indices(spec.dimension, K)) {
        c = std::max(c, spectral_derivative(phi, beta).max_abs());
        c = std::max(c, spectral_derivative(Phi, beta).max_abs());
    }
    return c;
}

AtomicDecomposition analyze(const GridFunction& f, const CalderonFrame& frame, const AnalyzeOptions& options) {
    require_same_grid(f.spec(), frame.spec(), "analyze");
    const auto& lad = frame.ladder();
    const int V = options.V < 0 ? lad.octaves : options.V;
    require((options.alpha == nullptr) == (options.p == nullptr), ErrorKind::parameter,
            "analyze: target alpha and p must be given together");
    if (options.alpha) {
        const double need_K = std::floor(options.alpha->max()) + 1.0;
        const double need_L = std::max(-1.0, std::floor(-options.alpha->min()));
        require(options.K >= need_K, ErrorKind::hypothesis,
                "atom smoothness K = " + std::to_string(options.K) + " violates K >= [alpha+] + 1 = " +
                    short_number(need_K));
        require(options.L >= need_L, ErrorKind::hypothesis,
                "atom cancellation L = " + std::to_string(options.L) + " violates L >= max(-1, [-alpha-]) = " +
                    short_number(need_L));
    }

    AtomicDecomposition dec(f.spec(), lad, V, options.K, options.L, options.gamma);
    dec.C_phi_ = measure_C_phi(frame, options.K);
    dec.frame_id_ = frame.id();

    auto canon = std::make_shared<detail::CanonicalAtoms>(
        detail::CanonicalAtoms{frame, f, spectrum(f), frame.Phi_multiplier(), {}, {}, V});
    for (double& x : canon->Psi) x = std::sqrt(std::max(x, 0.0));
    for (int v = 0; v <= V; ++v) canon->parts.push_back(partition_cubes(f.spec(), v));

    const double cell = f.spec().cell_volume();
    auto cube_energy = [&](const GridFunction& g, const CubePartition& part, double w, std::vector<double>& e) {
        for (std::size_t c = 0; c < part.cubes.size(); ++c) {
            double s = 0.0;
            for (std::size_t i : part.members[c]) s += std::norm(g[i]);
            e[c] += w * s * cell;
        }
    };

    // energies[v][c]
    std::vector<std::vector<double>> energies(V + 1);
    for (int v = 0; v <= V; ++v) energies[v].assign(canon->parts[v].cubes.size(), 0.0);
    cube_energy(canon->band(canon->Psi), canon->parts[0], 1.0, energies[0]);

    std::vector<std::vector<double>> per_node(lad.size());
    parallel_for(lad.size(), [&](std::size_t k) {
        if (!canon->node_used(k)) return;
        const int v = lad.octave[k];
        per_node[k].assign(canon->parts[v].cubes.size(), 0.0);
        cube_energy(canon->band(canon->psi(lad.t[k])), canon->parts[v], lad.w[k], per_node[k]);
    });
    for (std::size_t k = 0; k < lad.size(); ++k) {
        if (per_node[k].empty()) continue;
        auto& e = energies[lad.octave[k]];
        for (std::size_t c = 0; c < e.size(); ++c) e[c] += per_node[k][c];
    }

    double top = 0.0;
    for (const auto& e : energies)
        for (double x : e) top = std::max(top, dec.C_phi_ * std::sqrt(x));
    for (int v = 0; v <= V; ++v) {
        const auto& part = canon->parts[v];
        for (std::size_t c = 0; c < part.cubes.size(); ++c) {
            double lam = dec.C_phi_ * std::sqrt(energies[v][c]);
            if (!(lam >= kCoefficientFloor * top)) lam = 0.0;
            canon->lambda[part.cubes[c]] = lam;
            dec.coefficients_[part.cubes[c]] = lam;
        }
    }
    dec.canonical_ = std::move(canon);
    return dec;
}

namespace {

// Spectrum of level v of the synthesis, canonical part only.
std::vector<cplx> canonical_level(const AtomicDecomposition& dec, const detail::CanonicalAtoms& canon,
                                  const std::map<DyadicCube, GridFunction>& explicit_atoms, int v) {
    const auto& part = canon.parts[v];
    std::vector<double> scale(dec.spec().total(), 0.0);
    bool any = false;
    for (std::size_t c = 0; c < part.cubes.size(); ++c) {
        const DyadicCube& cube = part.cubes[c];
        if (explicit_atoms.contains(cube)) continue;
        const double orig = canon.lambda.at(cube);
        const double lam = dec.coefficient(cube);
        if (orig == 0.0 || lam == 0.0) continue;
        for (std::size_t i : part.members[c]) scale[i] = lam / orig;
        any = true;
    }
    if (!any) return {};
    return canon.level_spectrum(v, scale);
}

}  // namespace

GridFunction synthesize(const AtomicDecomposition& dec) {
    const auto& spec = dec.spec();
    std::vector<cplx> acc(spec.total(), cplx{});
    std::vector<cplx> direct(spec.total(), cplx{});
    for (const auto& [cube, lam] : dec.coefficients_) {
        if (lam == 0.0) continue;
        if (auto it = dec.explicit_atoms_.find(cube); it != dec.explicit_atoms_.end()) {
            for (std::size_t i = 0; i < direct.size(); ++i) direct[i] += lam * it->second[i];
            continue;
        }
        require(dec.canonical_ && dec.canonical_->lambda.contains(cube), ErrorKind::parameter,
                "synthesize: coefficient at level " + std::to_string(cube.level) + ", index " +
                    std::to_string(cube.index[0]) + " has no atom");
    }
    if (dec.canonical_) {
        std::vector<std::vector<cplx>> levels(dec.V() + 1);
        parallel_for(levels.size(), [&](std::size_t v) {
            levels[v] = canonical_level(dec, *dec.canonical_, dec.explicit_atoms_, static_cast<int>(v));
        });
        for (const auto& s : levels)
            for (std::size_t k = 0; k < s.size(); ++k) acc[k] += s[k];
    }
    return from_spectrum(spec, std::move(acc)).plus(GridFunction(spec, std::move(direct))).with_tag("synthesis");
}

std::vector<double> level_pairings(const AtomicDecomposition& dec, const GridFunction& test) {
    require_same_grid(dec.spec(), test.spec(), "level_pairings");
    std::vector<double> out(dec.V() + 1, 0.0);
    parallel_for(out.size(), [&](std::size_t v) {
        std::vector<cplx> level(dec.spec().total(), cplx{});
        if (dec.canonical_) {
            auto s = canonical_level(dec, *dec.canonical_, dec.explicit_atoms_, static_cast<int>(v));
            if (!s.empty()) {
                GridFunction g = from_spectrum(dec.spec(), std::move(s));
                for (std::size_t i = 0; i < level.size(); ++i) level[i] = g[i];
            }
        }
        for (const auto& [cube, a] : dec.explicit_atoms_) {
            if (cube.level != static_cast<int>(v)) continue;
            const double lam = dec.coefficient(cube);
            for (std::size_t i = 0; i < level.size(); ++i) level[i] += lam * a[i];
        }
        for (std::size_t i = 0; i < level.size(); ++i) level[i] *= std::conj(test[i]);
        out[v] = std::abs(integrate_complex(GridFunction(dec.spec(), std::move(level))));
    });
    return out;
}

ParsevalCheck parseval_check(const GridFunction& f, const CalderonFrame& frame, const AtomicDecomposition& dec) {
    require_same_grid(f.spec(), dec.spec(), "parseval_check");
    ParsevalCheck r;
    for (const auto& [cube, lam] : dec.coefficients()) r.coefficient_energy += lam * lam;
    // ||m (.) * f||_2^2 = L^-n sum |F f|^2 m^2, with m^2 the frame multiplier itself.
    const auto F = spectrum(f);
    const double norm = std::pow(f.spec().box_length, -f.spec().dimension);
    auto energy = [&](const std::vector<double>& m2) {
        double s = 0.0;
        for (std::size_t k = 0; k < F.size(); ++k) s += std::norm(F[k]) * m2[k];
        return s * norm;
    };
    double e = energy(frame.Phi_multiplier());
    const auto& lad = frame.ladder();
    for (std::size_t k = 0; k < lad.size(); ++k)
        if (lad.octave[k] <= dec.V() && frame.node_active(k)) e += lad.w[k] * energy(frame.phi_multiplier(lad.t[k]));
    r.profile_energy = dec.C_phi() * dec.C_phi() * e;
    r.ratio = r.profile_energy > 0.0 ? r.coefficient_energy / r.profile_energy : 1.0;
    return r;
}

// ===========================================================================
// Sequence norm
// ===========================================================================

double sequence_norm_b(const AtomicDecomposition& dec, const ExponentField& alpha, const ExponentField& p,
                       const ExponentField& q, SequenceForm form, HalfDimensionSign sign) {
    const auto& spec = dec.spec();
    require(alpha.kind() == ExponentKind::alpha && p.kind() == ExponentKind::p, ErrorKind::parameter,
            "sequence_norm_b: alpha and p fields expected");
    require_same_grid(spec, alpha.grid(), "sequence_norm_b alpha");
    require_same_grid(spec, p.grid(), "sequence_norm_b p");
    require(q.on_t_axis(), ErrorKind::parameter, "sequence_norm_b: q must be a q(t) field");
    const double half = (sign == HalfDimensionSign::plus ? 0.5 : -0.5) * spec.dimension;
    const double cell = spec.cell_volume();
    const std::vector<double> measure(spec.total(), cell);

    auto weighted_norm = [&](const std::vector<double>& u, double log_t_factor) {
        // || exp(log_t_factor * (alpha + half)) u ||_{p}
        std::vector<double> l(u.size());
        for (std::size_t i = 0; i < u.size(); ++i)
            l[i] = u[i] > 0.0 ? std::log(u[i]) + log_t_factor * (alpha[i] + half) : -INFINITY;
        return luxemburg_log(l, p.samples(), measure).value;
    };

    const double level0 = weighted_norm(dec.level_step_function(0), 0.0);
    std::vector<std::vector<double>> u(dec.V() + 1);
    for (int v = 1; v <= dec.V(); ++v) u[v] = dec.level_step_function(v);

    if (form == SequenceForm::discrete) {
        const double q0 = q.value_at_t(0.0);
        require(std::isfinite(q0) && q0 > 0.0, ErrorKind::unsupported, "discrete b-norm needs finite q(0)");
        double s = 0.0;
        for (int v = 1; v <= dec.V(); ++v) s += std::pow(weighted_norm(u[v], v * std::log(2.0)), q0);
        return level0 + std::pow(s, 1.0 / q0);
    }

    const auto& lad = dec.ladder();
    require(q.t_nodes() == lad.t, ErrorKind::grid_mismatch, "sequence_norm_b: q is not sampled on the ladder");
    std::vector<double> profile(lad.size(), 0.0);
    parallel_for(lad.size(), [&](std::size_t k) {
        const int v = lad.octave[k];
        if (v <= dec.V()) profile[k] = weighted_norm(u[v], -std::log(lad.t[k]));
    });
    return level0 + octave_block_norm(profile, q, lad).value;
}

// ===========================================================================
// Survey
// ===========================================================================

nlohmann::json AtomSurvey::to_json() const {
    nlohmann::json j;
    j["inflation_constant"] = inflation_constant;
    j["gamma_effective"] = gamma_effective;
    j["gamma_one_percent"] = gamma_one_percent;
    j["worst_leak_at_gamma"] = worst_leak_at_gamma;
    j["strict_pass"] = strict_pass;
    j["inflated_pass"] = inflated_pass;
    j["atoms"] = nlohmann::json::array();
    for (const auto& a : atoms) j["atoms"].push_back(a.to_json());
    return j;
}

AtomSurvey survey_atoms(const AtomicDecomposition& dec, int per_level) {
    std::vector<DyadicCube> picks;
    for (int v = 0; v <= dec.V(); ++v) {
        const auto r = dec.ranked(v);
        for (int i = 0; i < per_level && i < static_cast<int>(r.size()); ++i) picks.push_back(r[i].first);
    }
    AtomSurvey s;
    s.atoms.resize(picks.size());
    parallel_for(picks.size(), [&](std::size_t i) {
        s.atoms[i] = validate_atom(dec.atom(picks[i]), picks[i], dec.K(), dec.L(), dec.gamma());
    });
    for (const auto& a : s.atoms) {
        s.inflation_constant = std::max(s.inflation_constant, a.derivative_constant);
        s.gamma_effective = std::max(s.gamma_effective, a.gamma_effective);
        s.gamma_one_percent = std::max(s.gamma_one_percent, a.gamma_one_percent);
        s.worst_leak_at_gamma = std::max(s.worst_leak_at_gamma, a.support_leak);
        s.strict_pass = s.strict_pass && a.pass;
        s.inflated_pass = s.inflated_pass && a.moment_pass;
    }
    s.inflated_pass = s.inflated_pass && std::isfinite(s.inflation_constant) && std::isfinite(s.gamma_effective);
    return s;
}

// ===========================================================================
// Export / import
// ===========================================================================

namespace {

std::string atom_file_name(const DyadicCube& c, int n) {
    std::ostringstream os;
    os << "atom_v" << c.level << "_m" << c.index[0];
    if (n == 2) os << "_" << c.index[1];
    os << ".vbgf";
    return os.str();
}

}  // namespace

void export_decomposition(const std::filesystem::path& path, const AtomicDecomposition& dec,
                          const std::optional<std::filesystem::path>& atom_dir) {
    const int n = dec.spec().dimension;
    std::ostringstream os;
    os << (n == 1 ? "v,m1,lambda\n" : "v,m1,m2,lambda\n");
    for (const auto& [c, lam] : dec.coefficients()) {
        os << c.level << ',' << c.index[0];
        if (n == 2) os << ',' << c.index[1];
        os << ',' << format_number(lam) << '\n';
    }
    write_text_file(path, os.str());

    nlohmann::json side;
    side["dimension"] = n;
    side["box_length"] = dec.spec().box_length;
    side["points"] = dec.spec().points;
    side["octaves"] = dec.ladder().octaves;
    side["nodes_per_octave"] = dec.ladder().nodes_per_octave;
    side["V"] = dec.V();
    side["K"] = dec.K();
    side["L"] = dec.L();
    side["gamma"] = dec.gamma();
    side["C_phi"] = dec.C_phi();
    side["frame"] = dec.frame_id();
    side["source"] = nullptr;
    side["atoms"] = nlohmann::json::array();
    if (dec.is_canonical()) {
        // Canonical atoms are rebuilt from the analysed function on import.
        const std::filesystem::path src = path.string() + ".source.vbgf";
        write_grid_raw(src, dec.canonical_->source);
        side["source"] = src.filename().string();
        side["bump"] = std::string(to_string(dec.canonical_->frame.kind()));
    }
    if (atom_dir) {
        std::filesystem::create_directories(*atom_dir);
        for (const auto& [c, lam] : dec.coefficients()) {
            if (lam == 0.0 || !dec.has_atom(c)) continue;
            const auto file = *atom_dir / atom_file_name(c, n);
            write_grid_raw(file, dec.atom(c));
            side["atoms"].push_back({{"v", c.level}, {"m", {c.index[0], c.index[1]}}, {"file", file.string()}});
        }
    }
    write_json_file(path.string() + ".json", side);
}

AtomicDecomposition import_decomposition(const std::filesystem::path& path) {
    std::ifstream js(path.string() + ".json");
    require(static_cast<bool>(js), ErrorKind::io, "missing decomposition sidecar " + path.string() + ".json");
    nlohmann::json side;
    try {
        js >> side;
    } catch (const std::exception& e) {
        fail(ErrorKind::parse, "decomposition sidecar: " + std::string(e.what()));
    }
    const GridSpec spec = make_grid(side.at("dimension").get<int>(), side.at("box_length").get<double>(),
                                    side.at("points").get<int>());
    const ScaleLadder lad = make_ladder(side.at("octaves").get<int>(), side.at("nodes_per_octave").get<int>());
    const int V = side.at("V").get<int>(), K = side.at("K").get<int>(), L = side.at("L").get<int>();
    const double gamma = side.at("gamma").get<double>();

    AtomicDecomposition dec(spec, lad, V, K, L, gamma);
    if (!side.at("source").is_null()) {
        const auto src = path.parent_path() / side.at("source").get<std::string>();
        const auto frame = build_resolution_of_unity(spec, lad, parse_bump_kind(side.at("bump").get<std::string>()));
        AnalyzeOptions opt;
        opt.V = V;
        opt.K = K;
        opt.L = L;
        opt.gamma = gamma;
        dec = analyze(read_grid_raw(src), frame, opt);
    } else {
        dec.C_phi_ = side.at("C_phi").get<double>();
        dec.frame_id_ = side.at("frame").get<std::string>();
    }
    dec.coefficients_.clear();

    std::ifstream is(path);
    require(static_cast<bool>(is), ErrorKind::io, "cannot open " + path.string());
    std::string line;
    std::getline(is, line);
    int row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
        require(cols.size() == static_cast<std::size_t>(spec.dimension + 2), ErrorKind::parse,
                path.string() + ":" + std::to_string(row) + ": wrong column count");
        try {
            DyadicCube c{std::stoi(cols[0]), {std::stol(cols[1]), spec.dimension == 2 ? std::stol(cols[2]) : 0}};
            dec.set_coefficient(c, std::stod(cols.back()));
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            fail(ErrorKind::parse, path.string() + ":" + std::to_string(row) + ": malformed number");
        }
    }
    for (const auto& a : side.at("atoms")) {
        DyadicCube c{a.at("v").get<int>(), {a.at("m")[0].get<long>(), a.at("m")[1].get<long>()}};
        dec.set_atom(c, read_grid_raw(a.at("file").get<std::string>()));
    }
    return dec;
}

}  // namespace vbesov
