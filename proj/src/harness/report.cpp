#include "vbesov/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "vbesov/error.hpp"
#include "vbesov/json_out.hpp"

namespace vbesov::harness {

HarnessSettings HarnessSettings::refined() const {
    HarnessSettings r = *this;
    r.points *= 2;
    r.octaves *= 2;
    r.nodes_per_octave *= 2;
    r.refine = false;
    return r;
}

nlohmann::json HarnessSettings::to_json() const {
    return {{"seed", seed},
            {"box_length", box_length},
            {"points", points},
            {"octaves", octaves},
            {"nodes_per_octave", nodes_per_octave},
            {"peetre_a", peetre_a},
            {"local_mean_S", local_mean_S},
            {"local_mean_epsilon", local_mean_epsilon},
            {"refine", refine}};
}

std::string_view to_string(Expectation e) noexcept {
    switch (e) {
        case Expectation::bounded: return "bounded";
        case Expectation::blow_up: return "blow_up";
        case Expectation::exact: return "exact";
    }
    return "bounded";
}

namespace {

Expectation parse_expectation(const std::string& s) {
    for (Expectation e : {Expectation::bounded, Expectation::blow_up, Expectation::exact})
        if (s == to_string(e)) return e;
    fail(ErrorKind::parse, "unknown expectation '" + s + "'");
}

// Numbers that went through dump_json may come back as "inf" or "nan".
double number(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

nlohmann::json ConfigOutcome::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["parameters"] = parameters;
    j["expectation"] = std::string(to_string(expectation));
    j["constant"] = constant;
    j["refined_constant"] = refined_constant ? nlohmann::json(*refined_constant) : nlohmann::json(nullptr);
    j["ok"] = ok;
    j["failure"] = failure;
    j["details"] = details;
    return j;
}

void CheckReport::add(ConfigOutcome outcome) {
    if (!outcome.ok) violations.push_back({outcome.name, outcome.failure, outcome.parameters});
    configs.push_back(std::move(outcome));
}

const ConfigOutcome& CheckReport::config(std::string_view name) const {
    for (const auto& c : configs)
        if (c.name == name) return c;
    fail(ErrorKind::parameter, "check " + id + " has no configuration '" + std::string(name) + "'");
}

nlohmann::json CheckReport::to_json() const {
    nlohmann::json j;
    j["id"] = id;
    j["title"] = title;
    j["seed"] = seed;
    j["settings"] = settings;
    j["configs"] = nlohmann::json::array();
    j["constants"] = nlohmann::json::object();
    for (const auto& c : configs) {
        j["configs"].push_back(c.to_json());
        j["constants"][c.name] = c.constant;
    }
    j["violations"] = nlohmann::json::array();
    for (const auto& v : violations)
        j["violations"].push_back({{"config", v.config}, {"message", v.message}, {"input", v.input}});
    j["pass"] = pass();
    j["timings"] = {{"seconds", runtime_seconds}};
    return j;
}

CheckReport report_from_json(const nlohmann::json& j) {
    try {
        CheckReport r;
        r.id = j.at("id").get<std::string>();
        r.title = j.at("title").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.settings = j.at("settings");
        for (const auto& c : j.at("configs")) {
            ConfigOutcome o;
            o.name = c.at("name").get<std::string>();
            o.parameters = c.at("parameters");
            o.expectation = parse_expectation(c.at("expectation").get<std::string>());
            o.constant = number(c.at("constant"));
            if (!c.at("refined_constant").is_null()) o.refined_constant = number(c.at("refined_constant"));
            o.ok = c.at("ok").get<bool>();
            o.failure = c.at("failure").get<std::string>();
            o.details = c.at("details");
            r.configs.push_back(std::move(o));
        }
        for (const auto& v : j.at("violations"))
            r.violations.push_back({v.at("config").get<std::string>(), v.at("message").get<std::string>(), v.at("input")});
        if (j.contains("timings")) r.runtime_seconds = number(j["timings"].at("seconds"));
        return r;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::parse, std::string("malformed check report: ") + e.what());
    }
}

std::string rollup_csv(const std::vector<CheckReport>& reports) {
    std::ostringstream out;
    out << "id,title,config,expectation,constant,refined_constant,ok,pass\n";
    for (const auto& r : reports)
        for (const auto& c : r.configs) {
            out << r.id << ",\"" << r.title << "\"," << c.name << ',' << to_string(c.expectation) << ','
                << format_number(c.constant) << ',' << (c.refined_constant ? format_number(*c.refined_constant) : "")
                << ',' << (c.ok ? "true" : "false") << ',' << (r.pass() ? "true" : "false") << '\n';
        }
    return out.str();
}

double relative_change(double a, double b) noexcept {
    const double m = std::max(std::abs(a), std::abs(b));
    return m == 0.0 ? 0.0 : std::abs(a - b) / m;
}

void judge_bounded(ConfigOutcome& c, double tolerance) {
    if (!std::isfinite(c.constant)) {
        c.ok = false;
        c.failure = "constant is not finite";
        return;
    }
    if (c.refined_constant) {
        const double change = relative_change(c.constant, *c.refined_constant);
        c.details["refinement_change"] = change;
        if (!std::isfinite(*c.refined_constant) || change > tolerance) {
            c.ok = false;
            c.failure = "constant moved by " + short_number(change) + " under refinement (limit " +
                        short_number(tolerance) + ")";
        }
    }
}

double SubsetMaxima::max() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : values) m = std::max(m, v);
    return m;
}

std::vector<double> SubsetMaxima::prefix_maxima() const {
    std::vector<double> out;
    const std::size_t n = values.size();
    for (std::size_t end : {n / 4, n / 2, n}) {
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < end; ++i) m = std::max(m, values[i]);
        out.push_back(m);
    }
    return out;
}

bool SubsetMaxima::monotone() const {
    const auto m = prefix_maxima();
    return std::is_sorted(m.begin(), m.end());
}

}  // namespace vbesov::harness
