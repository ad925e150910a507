#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "vbesov/grid.hpp"
#include "vbesov/harness/report.hpp"
#include "vbesov/json_out.hpp"
#include "vbesov/lebesgue.hpp"

namespace vbesov::harness::detail {

[[nodiscard]] GridSpec grid_of(const HarnessSettings& s);
[[nodiscard]] ScaleLadder ladder_of(const HarnessSettings& s);

// Generator for one check; the stream depends on the seed and the salt only.
[[nodiscard]] std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t salt);

// Least-squares slope of log2 y against log2 x.
[[nodiscard]] double log2_slope(std::span<const double> x, std::span<const double> y);

[[nodiscard]] std::vector<double> log_spaced(double lo, double hi, int count);

// A constant measured at the base settings and, when requested, at the
// refined ones; the outcome is judged with judge_bounded.
struct Measurement {
    double constant = 0.0;
    nlohmann::json details = nlohmann::json::object();
};

[[nodiscard]] ConfigOutcome measure_bounded(const std::string& name, nlohmann::json parameters,
                                            const HarnessSettings& settings,
                                            const std::function<Measurement(const HarnessSettings&)>& measure,
                                            double tolerance = kRefinementTolerance);

// Records the prefix maxima and fails the outcome when they are not monotone.
void attach_subset_maxima(ConfigOutcome& c, const SubsetMaxima& m);

}  // namespace vbesov::harness::detail
