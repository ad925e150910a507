#include "common.hpp"

#include <cmath>

#include "vbesov/error.hpp"

namespace vbesov::harness::detail {

GridSpec grid_of(const HarnessSettings& s) { return make_grid(1, s.box_length, s.points); }

ScaleLadder ladder_of(const HarnessSettings& s) { return make_ladder(s.octaves, s.nodes_per_octave); }

std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t salt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
    return std::mt19937_64(seq);
}

double log2_slope(std::span<const double> x, std::span<const double> y) {
    require(x.size() == y.size() && x.size() >= 2, ErrorKind::parameter, "log2_slope needs two or more points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::log2(x[i]), b = std::log2(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i)
        out[i] = count == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    return out;
}

ConfigOutcome measure_bounded(const std::string& name, nlohmann::json parameters, const HarnessSettings& settings,
                              const std::function<Measurement(const HarnessSettings&)>& measure, double tolerance) {
    ConfigOutcome c;
    c.name = name;
    c.parameters = std::move(parameters);
    c.expectation = Expectation::bounded;
    auto base = measure(settings);
    c.constant = base.constant;
    c.details = std::move(base.details);
    if (settings.refine) {
        auto fine = measure(settings.refined());
        c.refined_constant = fine.constant;
        c.details["refined"] = std::move(fine.details);
    }
    c.details["refinement_tolerance"] = tolerance;
    judge_bounded(c, tolerance);
    return c;
}

void attach_subset_maxima(ConfigOutcome& c, const SubsetMaxima& m) {
    c.details["subset_maxima"] = m.prefix_maxima();
    if (!m.monotone() && c.ok) {
        c.ok = false;
        c.failure = "maximum over a subset exceeds the maximum over the full sample set";
    }
}

}  // namespace vbesov::harness::detail
