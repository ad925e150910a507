#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace vbesov::harness {

// Grid, ladder and kernel parameters shared by every check.
struct HarnessSettings {
    std::uint64_t seed = 7;
    double box_length = 16.0;
    int points = 2048;
    int octaves = 8;
    int nodes_per_octave = 64;
    double peetre_a = 2.0;
    int local_mean_S = 1;
    double local_mean_epsilon = 1.0;
    bool refine = true;   // also run at doubled N, V, J

    // N, V and J doubled.
    [[nodiscard]] HarnessSettings refined() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

// Allowed relative change of a constant under refinement.
inline constexpr double kRefinementTolerance = 0.25;

enum class Expectation {
    bounded,   // finite constant, stable under refinement
    blow_up,   // hypothesis violated on purpose, growth must be visible
    exact,     // closed-form value
};

[[nodiscard]] std::string_view to_string(Expectation e) noexcept;

struct ConfigOutcome {
    std::string name;
    nlohmann::json parameters = nlohmann::json::object();
    Expectation expectation = Expectation::bounded;
    double constant = 0.0;
    std::optional<double> refined_constant;
    bool ok = true;
    std::string failure;   // set when !ok
    nlohmann::json details = nlohmann::json::object();

    [[nodiscard]] nlohmann::json to_json() const;
};

struct Violation {
    std::string config;
    std::string message;
    nlohmann::json input = nlohmann::json::object();
};

struct CheckReport {
    std::string id;
    std::string title;
    std::uint64_t seed = 0;
    nlohmann::json settings = nlohmann::json::object();
    std::vector<ConfigOutcome> configs;
    std::vector<Violation> violations;
    double runtime_seconds = 0.0;

    [[nodiscard]] bool pass() const noexcept { return violations.empty(); }

    // Records the outcome; a failed outcome also becomes a violation.
    void add(ConfigOutcome outcome);
    [[nodiscard]] const ConfigOutcome& config(std::string_view name) const;

    // Everything except runtime lives outside the "timings" field.
    [[nodiscard]] nlohmann::json to_json() const;
};

[[nodiscard]] CheckReport report_from_json(const nlohmann::json& j);

// id,title,config,expectation,constant,refined_constant,ok,pass
[[nodiscard]] std::string rollup_csv(const std::vector<CheckReport>& reports);

// |a - b| / max(|a|, |b|); 0 when both vanish.
[[nodiscard]] double relative_change(double a, double b) noexcept;

// Marks a bounded outcome as failed when the constant is not finite or moved
// by more than kRefinementTolerance.
void judge_bounded(ConfigOutcome& c, double tolerance = kRefinementTolerance);

// Running maxima of a sample sequence at 1/4, 1/2 and all of it.  A maximum
// over a subset can never exceed the maximum over the whole set; the check is
// kept as a self-consistency assertion on the stored constants.
struct SubsetMaxima {
    std::vector<double> values;

    void add(double v) { values.push_back(v); }
    [[nodiscard]] double max() const;
    [[nodiscard]] std::vector<double> prefix_maxima() const;
    [[nodiscard]] bool monotone() const;
};

}  // namespace vbesov::harness
