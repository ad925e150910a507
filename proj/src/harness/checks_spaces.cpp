#include <algorithm>
#include <cmath>
#include <numbers>

#include "common.hpp"
#include "vbesov/atomic.hpp"
#include "vbesov/besov.hpp"
#include "vbesov/frame.hpp"
#include "vbesov/harness/bank.hpp"
#include "vbesov/harness/checks.hpp"
#include "vbesov/parallel.hpp"

namespace vbesov::harness {

using detail::grid_of;
using detail::ladder_of;
using detail::Measurement;
using detail::measure_bounded;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double euler = std::numbers::e;

double wave(const Point& x, double L) { return std::sin(2 * pi * x[0] / L); }

ExponentField q_const(const ScaleLadder& ladder, double q) {
    return q_on_ladder(ladder, [q](double) { return q; }, q, "q=" + short_number(q));
}

ExponentField q_log(const ScaleLadder& ladder) {
    return q_on_ladder(ladder, [](double t) { return 2.0 + 1.0 / std::log(euler + 1.0 / t); }, 2.0,
                       "q=2+1/log(e+1/t)");
}

// ===========================================================================
// embeddings
// ===========================================================================

struct EmbeddingData {
    FunctionBank bank;
    ScaleLadder ladder;
    // profiles[member][space]
    std::vector<std::vector<ScaleProfile>> profiles;
};

enum Space : std::size_t {
    elementary_source,   // alpha = 0.45 + 0.5 sin, p = 2 + 0.5 sin
    elementary_target,   // alpha = 0.2 + 0.5 sin, p = 2 + 0.5 sin
    constant_half,       // alpha = 0.5, p = 2
    sobolev_source,      // alpha = 0.75, p = 2
    sobolev_target,      // alpha = 0.5, p = 4
    sobolev_var_source,  // alpha = 1, p = 2 + 0.3 sin
    sobolev_var_target,  // alpha = 1 - 1/p0 + 1/p1, p = 4 + 0.5 sin
    space_count
};

EmbeddingData embedding_profiles(const HarnessSettings& hs) {
    EmbeddingData d;
    const auto spec = grid_of(hs);
    d.ladder = ladder_of(hs);
    d.bank = make_function_bank(spec, hs.seed);
    const auto frame = build_resolution_of_unity(spec, d.ladder);
    const double L = hs.box_length;
    auto field = [&](const std::function<double(const Point&)>& g, ExponentKind kind) {
        return ExponentField::sample_on_grid(spec, g, kind);
    };
    auto p0v = [&](const Point& x) { return 2.0 + 0.3 * wave(x, L); };
    auto p1v = [&](const Point& x) { return 4.0 + 0.5 * wave(x, L); };
    const std::vector<std::pair<ExponentField, ExponentField>> spaces{
        {field([&](const Point& x) { return 0.45 + 0.5 * wave(x, L); }, ExponentKind::alpha),
         field([&](const Point& x) { return 2.0 + 0.5 * wave(x, L); }, ExponentKind::p)},
        {field([&](const Point& x) { return 0.2 + 0.5 * wave(x, L); }, ExponentKind::alpha),
         field([&](const Point& x) { return 2.0 + 0.5 * wave(x, L); }, ExponentKind::p)},
        {ExponentField::constant(spec, 0.5, ExponentKind::alpha), ExponentField::constant(spec, 2.0, ExponentKind::p)},
        {ExponentField::constant(spec, 0.75, ExponentKind::alpha), ExponentField::constant(spec, 2.0, ExponentKind::p)},
        {ExponentField::constant(spec, 0.5, ExponentKind::alpha), ExponentField::constant(spec, 4.0, ExponentKind::p)},
        {ExponentField::constant(spec, 1.0, ExponentKind::alpha), field(p0v, ExponentKind::p)},
        {field([&](const Point& x) { return 1.0 - 1.0 / p0v(x) + 1.0 / p1v(x); }, ExponentKind::alpha),
         field(p1v, ExponentKind::p)},
    };
    d.profiles.assign(d.bank.members.size(), std::vector<ScaleProfile>(space_count));
    const std::size_t jobs = d.bank.members.size() * space_count;
    parallel_for(jobs, [&](std::size_t j) {
        const std::size_t i = j / space_count, sp = j % space_count;
        d.profiles[i][sp] = lp_profile(d.bank.members[i].f, frame, spaces[sp].first, spaces[sp].second);
    });
    return d;
}

// max over the bank of ||f||_target / ||f||_source
Measurement embedding_constant(const EmbeddingData& d, Space src, const ExponentField& q_src, Space dst,
                               const ExponentField& q_dst) {
    double c = 0.0;
    std::string worst;
    std::vector<double> per;
    for (std::size_t i = 0; i < d.bank.members.size(); ++i) {
        const double a = norm_from_profile(d.profiles[i][src], q_src, d.ladder, NormForm::direct);
        const double b = norm_from_profile(d.profiles[i][dst], q_dst, d.ladder, NormForm::direct);
        const double ratio = a > 0.0 ? b / a : 0.0;
        per.push_back(ratio);
        if (ratio > c) {
            c = ratio;
            worst = d.bank.members[i].name;
        }
    }
    return {c, {{"per_member", per}, {"worst_member", worst}}};
}

// max_{|beta| <= 2} sup (1 + |x|)^2 |D^beta f|
double schwartz_seminorm(const GridFunction& f) {
    double s = 0.0;
    for (int b = 0; b <= 2; ++b) {
        const auto d = spectral_derivative(f, {b, 0});
        for (std::size_t i = 0; i < d.size(); ++i)
            s = std::max(s, std::pow(1.0 + std::abs(f.spec().coordinate(int(i))), 2) * std::abs(d[i]));
    }
    return s;
}

bool schwartz_like(const BankMember& m) {
    return m.family != MemberFamily::weierstrass && m.family != MemberFamily::noise;
}

}  // namespace

CheckReport check_embeddings(const HarnessSettings& s) {
    CheckReport r;
    // Profiles are shared by all configurations; one pass per grid.
    const auto base = embedding_profiles(s);
    std::optional<EmbeddingData> fine;
    if (s.refine) fine = embedding_profiles(s.refined());
    auto data = [&](const HarnessSettings& hs) -> const EmbeddingData& {
        return hs.points == s.points ? base : *fine;
    };

    {   // identical spaces
        ConfigOutcome c;
        c.name = "identical_spaces";
        c.parameters = {{"alpha", "0.5"}, {"p", "2"}, {"q", "2"}};
        c.expectation = Expectation::exact;
        const auto q = q_const(base.ladder, 2.0);
        const auto m = embedding_constant(base, constant_half, q, constant_half, q);
        c.constant = m.constant;
        c.details = m.details;
        if (c.constant != 1.0) {
            c.ok = false;
            c.failure = "identical spaces gave a constant different from 1";
        }
        r.add(std::move(c));
    }

    r.add(measure_bounded("elementary",
                          {{"source", {{"alpha", "0.45+0.5sin"}, {"p", "2+0.5sin"}, {"q", "2+1/log(e+1/t)"}}},
                           {"target", {{"alpha", "0.2+0.5sin"}, {"p", "2+0.5sin"}, {"q", "2"}}}},
                          s, [&](const HarnessSettings& hs) {
                              const auto& d = data(hs);
                              return embedding_constant(d, elementary_source, q_log(d.ladder), elementary_target,
                                                        q_const(d.ladder, 2.0));
                          }));

    {
        auto c = measure_bounded("q_monotone", {{"alpha", "0.5"}, {"p", "2"}, {"q_source", 2.0}, {"q_target", 3.0}}, s,
                                 [&](const HarnessSettings& hs) {
                                     const auto& d = data(hs);
                                     return embedding_constant(d, constant_half, q_const(d.ladder, 2.0), constant_half,
                                                               q_const(d.ladder, 3.0));
                                 });
        if (c.ok && !(c.constant <= 1.1)) {
            c.ok = false;
            c.failure = "q-monotone constant exceeds 1.1";
        }
        r.add(std::move(c));
    }

    r.add(measure_bounded("q_monotone_variable",
                          {{"alpha", "0.5"}, {"p", "2"}, {"q_source", "2+1/log(e+1/t)"}, {"q_target", "3-1/log(e+1/t)"}},
                          s, [&](const HarnessSettings& hs) {
                              const auto& d = data(hs);
                              const auto qt = q_on_ladder(d.ladder, [](double t) { return 3.0 - 1.0 / std::log(euler + 1.0 / t); }, 3.0);
                              return embedding_constant(d, constant_half, q_log(d.ladder), constant_half, qt);
                          }));

    r.add(measure_bounded("sobolev_constant",
                          {{"source", {{"alpha", 0.75}, {"p", 2.0}}}, {"target", {{"alpha", 0.5}, {"p", 4.0}}}, {"q", 2.0}},
                          s, [&](const HarnessSettings& hs) {
                              const auto& d = data(hs);
                              const auto q = q_const(d.ladder, 2.0);
                              return embedding_constant(d, sobolev_source, q, sobolev_target, q);
                          }));

    r.add(measure_bounded("sobolev_variable",
                          {{"source", {{"alpha", "1"}, {"p", "2+0.3sin"}}},
                           {"target", {{"alpha", "1-1/p0+1/p1"}, {"p", "4+0.5sin"}}},
                           {"q", 2.0}},
                          s, [&](const HarnessSettings& hs) {
                              const auto& d = data(hs);
                              const auto q = q_const(d.ladder, 2.0);
                              return embedding_constant(d, sobolev_var_source, q, sobolev_var_target, q);
                          }));

    r.add(measure_bounded("schwartz_to_besov",
                          {{"space", {{"alpha", 0.5}, {"p", 2.0}, {"q", 2.0}}},
                           {"seminorm", "max_{beta<=2} sup (1+|x|)^2 |D^beta f|"}},
                          s, [&](const HarnessSettings& hs) {
                              const auto& d = data(hs);
                              const auto q = q_const(d.ladder, 2.0);
                              double c = 0.0;
                              std::vector<std::string> used;
                              for (std::size_t i = 0; i < d.bank.members.size(); ++i) {
                                  const auto& m = d.bank.members[i];
                                  if (!schwartz_like(m)) continue;
                                  used.push_back(m.name);
                                  c = std::max(c, norm_from_profile(d.profiles[i][constant_half], q, d.ladder,
                                                                    NormForm::direct) / schwartz_seminorm(m.f));
                              }
                              return Measurement{c, {{"members", used}}};
                          }));

    r.add(measure_bounded("besov_to_distributions",
                          {{"space", {{"alpha", 0.5}, {"p", 2.0}, {"q", 2.0}}}, {"test", "exp(-x^2/2)"}}, s,
                          [&](const HarnessSettings& hs) {
                              const auto& d = data(hs);
                              const auto q = q_const(d.ladder, 2.0);
                              const auto phi = GridFunction::sample_real(d.bank.spec, [](const Point& x) {
                                  return std::exp(-0.5 * x[0] * x[0]);
                              });
                              double c = 0.0;
                              for (std::size_t i = 0; i < d.bank.members.size(); ++i) {
                                  const auto prod = d.bank.members[i].f.times(phi.real_part());
                                  const double pairing = std::abs(integrate_complex(prod));
                                  c = std::max(c, pairing / norm_from_profile(d.profiles[i][constant_half], q,
                                                                              d.ladder, NormForm::direct));
                              }
                              return Measurement{c, {}};
                          }));
    return r;
}

// ===========================================================================
// norm equivalences
// ===========================================================================

namespace {

const std::vector<std::string> kFormNames{"direct_exp",    "q0_exp",          "peetre_exp",       "direct_smoothstep",
                                          "q0_smoothstep", "peetre_smoothstep", "local_mean_prime", "local_mean_double_prime"};

struct EquivalenceRun {
    std::vector<std::vector<double>> norms;   // [member][form]
    std::vector<std::vector<double>> worst;   // [form][form] max over bank of norm_i / norm_j
    double constant = 0.0;                    // max over members and pairs of max(r, 1/r)
    double gaussian_constant = 0.0;
    std::string worst_member, worst_pair;
};

EquivalenceRun equivalence_run(const HarnessSettings& hs, bool variable) {
    const auto spec = grid_of(hs);
    const auto ladder = ladder_of(hs);
    const auto bank = make_function_bank(spec, hs.seed);
    const auto fexp = build_resolution_of_unity(spec, ladder, BumpKind::exp);
    const auto fsmooth = build_resolution_of_unity(spec, ladder, BumpKind::smoothstep);
    const auto pair = build_local_mean_pair(spec, hs.local_mean_S, hs.local_mean_epsilon);
    const auto eb = make_exponent_bank(spec, ladder);
    const auto& alpha = variable ? eb.alpha_sign : eb.alpha_const;
    const auto& p = variable ? eb.p_sin : eb.p_const;
    const auto& q = variable ? eb.q_log : eb.q_const;
    const double a = hs.peetre_a;

    const std::size_t nm = bank.members.size(), nf = kFormNames.size();
    EquivalenceRun run;
    run.norms.assign(nm, std::vector<double>(nf, 0.0));
    // Six profile jobs per member: lp and Peetre for each frame, two local means.
    parallel_for(nm * 6, [&](std::size_t j) {
        const std::size_t i = j / 6;
        const auto& f = bank.members[i].f;
        auto& n = run.norms[i];
        switch (j % 6) {
            case 0: {
                const auto prof = lp_profile(f, fexp, alpha, p);
                n[0] = norm_from_profile(prof, q, ladder, NormForm::direct);
                n[1] = norm_from_profile(prof, q, ladder, NormForm::q0);
                break;
            }
            case 1: n[2] = norm_from_profile(peetre_profile(f, fexp, alpha, p, a), q, ladder, NormForm::direct); break;
            case 2: {
                const auto prof = lp_profile(f, fsmooth, alpha, p);
                n[3] = norm_from_profile(prof, q, ladder, NormForm::direct);
                n[4] = norm_from_profile(prof, q, ladder, NormForm::q0);
                break;
            }
            case 3: n[5] = norm_from_profile(peetre_profile(f, fsmooth, alpha, p, a), q, ladder, NormForm::direct); break;
            case 4: n[6] = local_mean_norm(f, pair, ladder, alpha, p, q, a, LocalMeanVariant::prime).value; break;
            case 5: n[7] = local_mean_norm(f, pair, ladder, alpha, p, q, a, LocalMeanVariant::double_prime).value; break;
        }
    });
    run.worst.assign(nf, std::vector<double>(nf, 0.0));
    for (std::size_t i = 0; i < nm; ++i) {
        const auto& n = run.norms[i];
        for (std::size_t x = 0; x < nf; ++x)
            for (std::size_t y = 0; y < nf; ++y) {
                const double ratio = n[x] / n[y];
                run.worst[x][y] = std::max(run.worst[x][y], ratio);
                if (ratio > run.constant) {
                    run.constant = ratio;
                    run.worst_member = bank.members[i].name;
                    run.worst_pair = kFormNames[x] + "/" + kFormNames[y];
                }
                if (bank.members[i].family == MemberFamily::gaussian)
                    run.gaussian_constant = std::max(run.gaussian_constant, ratio);
            }
    }
    return run;
}

}  // namespace

CheckReport check_norm_equivalences(const HarnessSettings& s) {
    CheckReport r;
    {   // zero function: every form vanishes
        ConfigOutcome c;
        c.name = "zero_function";
        c.expectation = Expectation::exact;
        const auto spec = grid_of(s);
        const auto ladder = ladder_of(s);
        const auto frame = build_resolution_of_unity(spec, ladder);
        const auto pair = build_local_mean_pair(spec, s.local_mean_S, s.local_mean_epsilon);
        const auto eb = make_exponent_bank(spec, ladder);
        const auto z = GridFunction::zeros(spec);
        const double v = besov_norm(z, frame, eb.alpha_const, eb.p_const, eb.q_const, NormForm::direct).value +
                         peetre_norm(z, frame, eb.alpha_const, eb.p_const, eb.q_const, s.peetre_a).value +
                         local_mean_norm(z, pair, ladder, eb.alpha_const, eb.p_const, eb.q_const, s.peetre_a,
                                         LocalMeanVariant::prime).value;
        c.constant = v;
        if (v != 0.0) {
            c.ok = false;
            c.failure = "nonzero norm of the zero function";
        }
        r.add(std::move(c));
    }

    for (bool variable : {false, true}) {
        std::optional<EquivalenceRun> base_run;
        auto c = measure_bounded(variable ? "variable_exponents" : "constant_exponents",
                                 {{"alpha", variable ? "0.2+0.5sin(2 pi x/L)" : "0.5"},
                                  {"p", variable ? "2+0.5sin(2 pi x/L)" : "2"},
                                  {"q", variable ? "2+1/log(e+1/t)" : "2"},
                                  {"forms", kFormNames},
                                  {"peetre_a", s.peetre_a},
                                  {"local_mean", {{"S", s.local_mean_S}, {"epsilon", s.local_mean_epsilon}}}},
                                 s, [&](const HarnessSettings& hs) {
                                     auto run = equivalence_run(hs, variable);
                                     Measurement m{run.constant,
                                                   {{"worst_member", run.worst_member},
                                                    {"worst_pair", run.worst_pair},
                                                    {"ratio_matrix_max", run.worst},
                                                    {"norms", run.norms}}};
                                     if (!base_run) base_run = std::move(run);
                                     return m;
                                 });
        if (c.ok && !(c.constant <= 10.0)) {
            c.ok = false;
            c.failure = "a ratio lies outside [1/10, 10]";
        }
        r.add(std::move(c));
        if (!variable) {
            ConfigOutcome g;
            g.name = "gaussian_constant_exponents";
            g.parameters = {{"members", "gaussian family"}, {"limit", 3.0}};
            g.constant = base_run->gaussian_constant;
            if (!(g.constant <= 3.0)) {
                g.ok = false;
                g.failure = "Gaussian ratio outside [1/3, 3]";
            }
            r.add(std::move(g));
        }
    }
    return r;
}

// ===========================================================================
// atomic decomposition
// ===========================================================================

CheckReport check_atomic(const HarnessSettings& s) {
    CheckReport r;
    const auto spec = grid_of(s);
    const auto ladder = ladder_of(s);
    const auto frame = build_resolution_of_unity(spec, ladder);
    const auto bank = make_function_bank(spec, s.seed);
    const auto eb = make_exponent_bank(spec, ladder);
    const std::size_t nm = bank.members.size();
    const int K = 2, Lm = 0;

    std::vector<AtomicDecomposition> decs;
    decs.reserve(nm);
    for (const auto& m : bank.members) {
        AnalyzeOptions opt;
        opt.K = K;
        opt.L = Lm;
        opt.alpha = &eb.alpha_sign;
        opt.p = &eb.p_sin;
        decs.push_back(analyze(m.f, frame, opt));
    }

    {   // round trip on band-limited members
        ConfigOutcome c;
        c.name = "round_trip";
        c.parameters = {{"K", K}, {"L", Lm}, {"band_limited_tail", 1e-10}, {"limit", 0.05}};
        std::vector<double> err(nm, -1.0);
        std::vector<std::string> used;
        parallel_for(nm, [&](std::size_t i) {
            const auto& f = bank.members[i].f;
            if (spectral_tail_fraction(f, frame.resolved_band()) > 1e-10) return;
            err[i] = l2_norm(synthesize(decs[i]).minus(f)) / l2_norm(f);
        });
        double worst = 0.0;
        nlohmann::json per = nlohmann::json::object();
        for (std::size_t i = 0; i < nm; ++i)
            if (err[i] >= 0.0) {
                worst = std::max(worst, err[i]);
                per[bank.members[i].name] = err[i];
            }
        c.constant = worst;
        c.details = {{"relative_l2_error", per}, {"resolved_band", frame.resolved_band()}};
        if (per.empty() || !(worst <= 0.05)) {
            c.ok = false;
            c.failure = per.empty() ? "no band-limited member" : "reconstruction error above 0.05";
        }
        r.add(std::move(c));
    }

    for (bool variable : {false, true}) {
        ConfigOutcome c;
        c.name = variable ? "sequence_norm_variable" : "sequence_norm_constant";
        const auto& alpha = variable ? eb.alpha_sign : eb.alpha_const;
        const auto& p = variable ? eb.p_sin : eb.p_const;
        const auto& q = variable ? eb.q_log : eb.q_const;
        c.parameters = {{"alpha", alpha.label()}, {"p", p.label()}, {"q", q.label()}, {"form", "continuous"},
                        {"limit", 10.0}};
        std::vector<double> ratio(nm), discrete(nm);
        parallel_for(nm, [&](std::size_t i) {
            const double b = besov_norm(bank.members[i].f, frame, alpha, p, q, NormForm::direct).value;
            ratio[i] = sequence_norm_b(decs[i], alpha, p, q, SequenceForm::continuous) / b;
            discrete[i] = sequence_norm_b(decs[i], alpha, p, q, SequenceForm::discrete) / b;
        });
        double worst = 0.0;
        for (double x : ratio) worst = std::max({worst, x, 1.0 / x});
        c.constant = worst;
        c.details = {{"ratio", ratio}, {"discrete_ratio", discrete}};
        if (!(worst <= 10.0)) {
            c.ok = false;
            c.failure = "sequence norm outside [1/10, 10] of the Besov norm";
        }
        r.add(std::move(c));
    }

    {   // validation of the largest atoms; support is measured, bounds inflated by c
        ConfigOutcome c;
        c.name = "atom_validation";
        c.parameters = {{"K", K}, {"L", Lm}, {"gamma", 3.0}, {"per_level", 3}};
        std::vector<AtomSurvey> surveys(nm);
        parallel_for(nm, [&](std::size_t i) { surveys[i] = survey_atoms(decs[i], 3); });
        double inflation = 0.0, gamma_eff = 0.0, gamma_pct = 0.0, leak = 0.0;
        bool inflated = true, strict = true;
        for (const auto& sv : surveys) {
            inflation = std::max(inflation, sv.inflation_constant);
            gamma_eff = std::max(gamma_eff, sv.gamma_effective);
            gamma_pct = std::max(gamma_pct, sv.gamma_one_percent);
            leak = std::max(leak, sv.worst_leak_at_gamma);
            inflated = inflated && sv.inflated_pass;
            strict = strict && sv.strict_pass;
        }
        c.constant = inflation;
        c.details = {{"inflation_constant", inflation},      {"gamma_effective", gamma_eff},
                     {"gamma_one_percent", gamma_pct},       {"worst_leak_at_gamma", leak},
                     {"strict_pass", strict},                {"inflated_pass", inflated},
                     {"C_phi", decs.front().C_phi()}};
        if (!inflated || !std::isfinite(inflation)) {
            c.ok = false;
            c.failure = "atoms fail even with the measured inflation constant";
        }
        r.add(std::move(c));
    }

    {   // pairing tails against a Gaussian test function
        ConfigOutcome c;
        const double alpha = 0.5, sm = alpha;   // s = alpha + n/p (t - 1) with t -> 1
        const double limit = -(Lm + 1 + sm) + 0.5;
        c.name = "pairing_tail";
        c.parameters = {{"test", "exp(-x^2/2)"}, {"alpha", alpha}, {"p", 2.0}, {"L", Lm}, {"s", sm},
                        {"slope_limit", limit}, {"floor", 1e-13}};
        const auto phi = GridFunction::sample_real(spec, [](const Point& x) { return std::exp(-0.5 * x[0] * x[0]); });
        std::vector<double> slope(nm, -INFINITY);
        std::vector<std::vector<double>> pair(nm);
        parallel_for(nm, [&](std::size_t i) {
            pair[i] = level_pairings(decs[i], phi);
            double top = 0.0;
            for (double v : pair[i]) top = std::max(top, v);
            std::vector<double> x, y;
            for (std::size_t v = 1; v < pair[i].size(); ++v)
                if (pair[i][v] > 1e-13 * top) {
                    x.push_back(std::exp2(double(v)));
                    y.push_back(pair[i][v]);
                }
            if (x.size() >= 3) slope[i] = detail::log2_slope(x, y);
        });
        double worst = -INFINITY;
        for (double v : slope) worst = std::max(worst, v);
        c.constant = worst;
        nlohmann::json slopes = nlohmann::json::object();
        for (std::size_t i = 0; i < nm; ++i)
            slopes[bank.members[i].name] = std::isfinite(slope[i]) ? nlohmann::json(slope[i]) : nlohmann::json(nullptr);
        c.details = {{"slope", slopes}, {"note", "null slope: fewer than three levels above the floor"}};
        if (worst > limit) {
            c.ok = false;
            c.failure = "pairing tail decays slower than the predicted slope";
        }
        r.add(std::move(c));
    }
    return r;
}

}  // namespace vbesov::harness
