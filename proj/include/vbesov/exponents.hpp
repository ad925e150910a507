#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vbesov/grid.hpp"

namespace vbesov {

enum class ExponentKind { p, alpha, q_of_t };

[[nodiscard]] std::string_view to_string(ExponentKind kind) noexcept;

struct HolderWitness {
    double value = 0.0;      // |g(x) - g(y)| log(e + 1/|x - y|), or the decay / origin product
    Point x{0.0, 0.0};
    Point y{0.0, 0.0};
    double distance = 0.0;
};

struct LogHolderEstimate {
    double clog_local = 0.0;
    HolderWitness local_witness;
    // Decay at infinity for spatial fields, decay towards t = 0 for q(t).
    std::optional<double> clog_decay;
    std::optional<HolderWitness> decay_witness;
    std::size_t pairs_examined = 0;
};

// Variable exponent sampled either on a spatial grid (p, alpha) or on a
// log-spaced t-axis in (0, 1] (q).  Immutable after construction.
class ExponentField {
public:
    [[nodiscard]] static ExponentField on_grid(const GridSpec& spec, std::vector<double> samples,
                                               ExponentKind kind, std::optional<double> limit = {},
                                               std::string label = {});
    [[nodiscard]] static ExponentField sample_on_grid(const GridSpec& spec,
                                                      const std::function<double(const Point&)>& g,
                                                      ExponentKind kind, std::optional<double> limit = {},
                                                      std::string label = {});
    [[nodiscard]] static ExponentField constant(const GridSpec& spec, double value, ExponentKind kind,
                                                std::string label = {});

    // q on the t-axis.  `q_zero` is q(0); `generator`, when given, is used to
    // evaluate q away from the sampled nodes.
    [[nodiscard]] static ExponentField on_t_axis(std::vector<double> t, std::vector<double> samples,
                                                 double q_zero,
                                                 std::function<double(double)> generator = {},
                                                 std::string label = {});
    [[nodiscard]] static ExponentField sample_on_t_axis(std::vector<double> t,
                                                        const std::function<double(double)>& q,
                                                        double q_zero, std::string label = {});

    [[nodiscard]] ExponentKind kind() const noexcept { return kind_; }
    [[nodiscard]] bool on_t_axis() const noexcept { return kind_ == ExponentKind::q_of_t; }
    [[nodiscard]] const GridSpec& grid() const;
    [[nodiscard]] const std::vector<double>& t_nodes() const;
    [[nodiscard]] const std::vector<double>& samples() const noexcept { return samples_; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return samples_[i]; }
    [[nodiscard]] double min() const noexcept { return min_; }
    [[nodiscard]] double max() const noexcept { return max_; }
    [[nodiscard]] const std::optional<double>& limit() const noexcept { return limit_; }
    [[nodiscard]] double clog_local() const noexcept { return estimate_.clog_local; }
    [[nodiscard]] std::optional<double> clog_decay() const noexcept { return estimate_.clog_decay; }
    [[nodiscard]] const LogHolderEstimate& estimate() const noexcept { return estimate_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }
    [[nodiscard]] bool is_constant() const noexcept { return min_ == max_; }

    // q(t) for any t in [0, 1]; q(0) is the stored limit.
    [[nodiscard]] double value_at_t(double t) const;

private:
    ExponentField() = default;
    void finish();

    ExponentKind kind_ = ExponentKind::p;
    std::optional<GridSpec> grid_;
    std::vector<double> t_;
    std::vector<double> samples_;
    std::optional<double> limit_;
    std::function<double(double)> generator_;
    double min_ = 0.0, max_ = 0.0;
    LogHolderEstimate estimate_;
    std::string label_;
};

struct LogHolderOptions {
    bool reciprocal = false;   // estimate constants of 1/g instead of g
    bool decay = true;         // also estimate the decay constant (needs a limit value)
    std::size_t max_pairs = 1'000'000;
};

// Pairwise estimate over at most max_pairs pairs: every nearest-neighbour
// offset plus a deterministic spread of longer offsets.
[[nodiscard]] LogHolderEstimate estimate_log_holder(const ExponentField& field,
                                                    const LogHolderOptions& options = {});

struct ClassReport {
    ExponentKind kind = ExponentKind::p;
    bool is_Plog = false;                   // p kind: 1/p locally log-Hoelder and decaying
    bool is_Clog_loc = false;               // field locally log-Hoelder at grid resolution
    bool is_log_holder_at_origin = false;   // q kind
    bool decay_checked = false;
    bool resolution_limited = false;        // local witness sits at grid scale (jump)
    LogHolderEstimate constants;            // of 1/p for the p kind, of the field otherwise
    std::vector<std::string> notes;
};

[[nodiscard]] ClassReport check_class(const ExponentField& field);

// CSV (coordinate(s), value) plus a JSON sidecar <path>.json with kind,
// label, limit, grid or t-axis and the cached constants.
void write_exponent_csv(const std::filesystem::path& path, const ExponentField& field);
[[nodiscard]] ExponentField read_exponent_csv(const std::filesystem::path& path);

}  // namespace vbesov
