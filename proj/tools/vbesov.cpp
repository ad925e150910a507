// vbesov: command-line front end.
//
// Exit status: 0 success, 1 runtime or I/O failure, 2 unparseable input or
// inadmissible exponent, 3 violated hypothesis, 4 verification violations.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vbesov/atomic.hpp"
#include "vbesov/besov.hpp"
#include "vbesov/config.hpp"
#include "vbesov/error.hpp"
#include "vbesov/frame.hpp"
#include "vbesov/grid_io.hpp"
#include "vbesov/harness/bank.hpp"
#include "vbesov/harness/checks.hpp"
#include "vbesov/json_out.hpp"
#include "vbesov/parallel.hpp"

namespace fs = std::filesystem;
using namespace vbesov;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitHypothesis = 3;
constexpr int kExitViolations = 4;

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::parse:
        case ErrorKind::admissibility:
        case ErrorKind::parameter: return kExitInput;
        case ErrorKind::hypothesis: return kExitHypothesis;
        default: return kExitFailure;
    }
}

nlohmann::json config_json(const RunConfig& c) {
    // The emitted text is the canonical form; keep it line by line.
    nlohmann::json j = nlohmann::json::object();
    const std::string text = emit_config(c);
    std::size_t start = 0;
    while (start < text.size()) {
        const std::size_t end = text.find('\n', start);
        const std::string line = text.substr(start, end - start);
        const std::size_t eq = line.find(" =");
        const std::string value = eq + 2 < line.size() ? line.substr(eq + 3) : std::string();
        j[line.substr(0, eq)] = value;
        start = end + 1;
    }
    return j;
}

struct Context {
    RunConfig config;
    fs::path out;
};

int cmd_gen_bank(const Context& ctx) {
    const auto spec = grid_spec(ctx.config);
    const auto bank = harness::make_function_bank(spec, ctx.config.seed);
    const fs::path dir = ctx.out / "bank";
    harness::write_bank(dir, bank);
    std::printf("wrote %zu members to %s\n", bank.members.size(), dir.string().c_str());
    return 0;
}

int cmd_norm(const Context& ctx) {
    const auto& c = ctx.config;
    const auto spec = grid_spec(c);
    const auto ladder = scale_ladder(c);
    const auto alpha = alpha_field(c, spec);
    const auto p = p_field(c, spec);
    const auto q = q_field(c, ladder);
    const auto f = input_function(c, spec);
    const NormForm form = parse_norm_form(c.form);

    BesovNormReport r;
    if (form == NormForm::local_mean_prime || form == NormForm::local_mean_double_prime) {
        const auto pair = build_local_mean_pair(spec, c.local_mean_S, c.local_mean_epsilon);
        r = local_mean_norm(f, pair, ladder, alpha, p, q, c.peetre_a,
                            form == NormForm::local_mean_prime ? LocalMeanVariant::prime
                                                               : LocalMeanVariant::double_prime);
    } else {
        const auto frame = build_resolution_of_unity(spec, ladder, parse_bump_kind(c.frame));
        r = form == NormForm::peetre ? peetre_norm(f, frame, alpha, p, q, c.peetre_a)
                                     : besov_norm(f, frame, alpha, p, q, form);
    }
    fs::create_directories(ctx.out);
    write_json_file(ctx.out / "norm.json", {{"config", config_json(c)}, {"result", r.to_json()}});
    std::printf("%s\n", format_number(r.value).c_str());
    for (const auto& w : r.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    return 0;
}

AtomicDecomposition decompose(const RunConfig& c, const GridFunction& f, const CalderonFrame& frame,
                              const ExponentField& alpha, const ExponentField& p) {
    AnalyzeOptions opt;
    opt.K = c.K;
    opt.L = c.L;
    opt.gamma = c.gamma;
    opt.alpha = &alpha;
    opt.p = &p;
    return analyze(f, frame, opt);
}

int cmd_decompose(const Context& ctx) {
    const auto& c = ctx.config;
    const auto spec = grid_spec(c);
    const auto ladder = scale_ladder(c);
    const auto frame = build_resolution_of_unity(spec, ladder, parse_bump_kind(c.frame));
    const auto alpha = alpha_field(c, spec);
    const auto p = p_field(c, spec);
    const auto q = q_field(c, ladder);
    const auto f = input_function(c, spec);

    const auto dec = decompose(c, f, frame, alpha, p);
    const auto back = synthesize(dec);
    const double norm_f = l2_norm(f);
    const double residual = norm_f > 0.0 ? l2_norm(back.minus(f)) / norm_f : l2_norm(back);
    const auto pc = parseval_check(f, frame, dec);

    fs::create_directories(ctx.out);
    export_decomposition(ctx.out / "decomposition.csv", dec);
    nlohmann::json j{{"config", config_json(c)},
                     {"coefficients", dec.coefficients().size()},
                     {"C_phi", dec.C_phi()},
                     {"relative_l2_residual", residual},
                     {"parseval", {{"coefficient_energy", pc.coefficient_energy},
                                   {"profile_energy", pc.profile_energy},
                                   {"ratio", pc.ratio}}},
                     {"sequence_norm", {{"continuous", sequence_norm_b(dec, alpha, p, q, SequenceForm::continuous)},
                                        {"discrete", sequence_norm_b(dec, alpha, p, q, SequenceForm::discrete)}}}};
    write_json_file(ctx.out / "decompose.json", j);
    std::printf("coefficients %zu  residual %s\n", dec.coefficients().size(), format_number(residual).c_str());
    return 0;
}

int cmd_synthesize(const Context& ctx, const std::string& input) {
    const auto& c = ctx.config;
    const fs::path in = input.empty() ? ctx.out / "decomposition.csv" : fs::path(input);
    const auto dec = import_decomposition(in);
    const auto g = synthesize(dec);
    fs::create_directories(ctx.out);
    write_grid_raw(ctx.out / "synthesized.vbgf", g);
    nlohmann::json j{{"input", in.string()}, {"coefficients", dec.coefficients().size()}};
    // Residual against the configured function when it lives on the same grid.
    if (dec.spec() == grid_spec(c)) {
        const auto f = input_function(c, dec.spec());
        const double norm_f = l2_norm(f);
        const double residual = norm_f > 0.0 ? l2_norm(g.minus(f)) / norm_f : l2_norm(g);
        j["relative_l2_residual"] = residual;
        std::printf("residual %s\n", format_number(residual).c_str());
    } else {
        j["relative_l2_residual"] = nullptr;
    }
    write_json_file(ctx.out / "synthesize.json", j);
    return 0;
}

std::vector<std::string> check_ids(std::vector<std::string> requested) {
    std::vector<std::string> ids;
    for (const auto& r : requested) {
        if (r == "all") {
            for (const auto& e : harness::check_registry()) ids.emplace_back(e.id);
        } else {
            ids.push_back(r);
        }
    }
    return ids;
}

int print_rollup(const std::vector<harness::CheckReport>& reports) {
    bool all = true;
    for (const auto& r : reports) {
        std::printf("%-20s %s  configs=%zu violations=%zu  %.1fs\n", r.id.c_str(), r.pass() ? "pass" : "FAIL",
                    r.configs.size(), r.violations.size(), r.runtime_seconds);
        for (const auto& v : r.violations) std::printf("    %s: %s\n", v.config.c_str(), v.message.c_str());
        all = all && r.pass();
    }
    return all ? 0 : kExitViolations;
}

void write_rollup(const fs::path& out, const std::vector<harness::CheckReport>& reports) {
    write_text_file(out / "rollup.csv", harness::rollup_csv(reports));
}

int cmd_verify(const Context& ctx, const std::vector<std::string>& requested, unsigned jobs) {
    require(!requested.empty(), ErrorKind::parameter, "verify needs a check id or 'all'");
    const auto ids = check_ids(requested);
    const auto reports = harness::run_checks(ids, harness_settings(ctx.config), jobs);
    fs::create_directories(ctx.out);
    for (const auto& r : reports) write_json_file(ctx.out / (r.id + ".json"), r.to_json());
    write_rollup(ctx.out, reports);
    return print_rollup(reports);
}

int cmd_report(const Context& ctx) {
    require(fs::is_directory(ctx.out), ErrorKind::io, "no output directory " + ctx.out.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(ctx.out)) {
        const auto stem = e.path().stem().string();
        if (e.path().extension() == ".json" && harness::is_check_id(stem)) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    require(!files.empty(), ErrorKind::io, "no check reports in " + ctx.out.string());
    std::vector<harness::CheckReport> reports;
    for (const auto& f : files) reports.push_back(harness::report_from_json(read_json_file(f)));
    write_rollup(ctx.out, reports);
    print_rollup(reports);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variable-exponent Besov norms, Calderon frames, atomic decompositions and their verification"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir, form;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> jobs;
    app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "seed for banks and sampled configurations");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--jobs", jobs, "worker count (0 = logical cores)");

    auto* gen = app.add_subcommand("gen-bank", "write the seeded function bank");
    auto* norm = app.add_subcommand("norm", "Besov norm of the configured function");
    norm->add_option("--form", form, "direct | discretized | q0 | peetre | local_mean_prime | local_mean_double_prime");
    auto* dec = app.add_subcommand("decompose", "atomic decomposition, CSV export and round-trip residual");
    auto* syn = app.add_subcommand("synthesize", "synthesize from an exported decomposition");
    std::string syn_input;
    syn->add_option("--input", syn_input, "decomposition CSV (default <out>/decomposition.csv)");
    auto* ver = app.add_subcommand("verify", "run verification checks");
    std::vector<std::string> ids, flagged;
    ver->add_option("ids", ids, "check ids or 'all'");
    ver->add_option("--check", flagged, "check id (repeatable)");
    auto* rep = app.add_subcommand("report", "roll-up of the check reports in the output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        Context ctx;
        if (!config_path.empty()) ctx.config = load_config(config_path);
        if (seed) ctx.config.seed = *seed;
        if (jobs) ctx.config.jobs = *jobs;
        if (!out_dir.empty()) ctx.config.output = out_dir;
        if (!form.empty()) {
            (void)parse_norm_form(form);
            ctx.config.form = form;
        }
        ctx.out = ctx.config.output;
        const unsigned workers = ctx.config.jobs ? ctx.config.jobs : std::max(1u, std::thread::hardware_concurrency());
        set_worker_count(workers);

        if (gen->parsed()) return cmd_gen_bank(ctx);
        if (norm->parsed()) return cmd_norm(ctx);
        if (dec->parsed()) return cmd_decompose(ctx);
        if (syn->parsed()) return cmd_synthesize(ctx, syn_input);
        if (ver->parsed()) {
            ids.insert(ids.end(), flagged.begin(), flagged.end());
            return cmd_verify(ctx, ids, workers);
        }
        if (rep->parsed()) return cmd_report(ctx);
    } catch (const Error& e) {
        std::fprintf(stderr, "vbesov: %s\n", e.what());
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "vbesov: %s\n", e.what());
        return kExitFailure;
    }
    return kExitFailure;
}
