#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vbesov/exponents.hpp"
#include "vbesov/frame.hpp"
#include "vbesov/lebesgue.hpp"

namespace vbesov {

enum class NormForm { direct, discretized, q0, peetre, local_mean_prime, local_mean_double_prime };

[[nodiscard]] std::string_view to_string(NormForm form) noexcept;
[[nodiscard]] NormForm parse_norm_form(std::string_view name);

enum class LocalMeanVariant { prime, double_prime };

struct ScaleProfile {
    std::vector<double> t;
    std::vector<double> values;   // one per ladder node
    double level0 = 0.0;
};

struct BesovNormReport {
    NormForm form = NormForm::direct;
    double value = 0.0;
    ScaleProfile profile;
    NormResult t_part;            // the t-integral part alone
    std::string kernel_id;
    std::string alpha_label, p_label, q_label;
    std::optional<double> peetre_a;
    std::vector<std::string> warnings;

    [[nodiscard]] nlohmann::json to_json() const;
};

// q(t) sampled on the ladder nodes, with q(0) given separately.
[[nodiscard]] ExponentField q_on_ladder(const ScaleLadder& ladder, const std::function<double(double)>& q,
                                        double q_zero, std::string label = {});

// values[k] = || t_k^{-alpha(.)} (phi_{t_k} * f) ||_{p(.)},  level0 = || Phi * f ||_{p(.)}
[[nodiscard]] ScaleProfile lp_profile(const GridFunction& f, const CalderonFrame& frame,
                                      const ExponentField& alpha, const ExponentField& p);

// direct, discretized or q0 form.
[[nodiscard]] BesovNormReport besov_norm(const GridFunction& f, const CalderonFrame& frame,
                                         const ExponentField& alpha, const ExponentField& p,
                                         const ExponentField& q, NormForm form);

// level0 plus the t-part of an already computed profile: the octave-block
// norm for `discretized`, the q(0) norm for `q0`, the variable norm otherwise.
[[nodiscard]] double norm_from_profile(const ScaleProfile& profile, const ExponentField& q,
                                       const ScaleLadder& ladder, NormForm form);

// Peetre maximal function of g on the periodic grid:
//   out(x) = max_y g(y) / (1 + d(x, y)/t)^a.
[[nodiscard]] std::vector<double> peetre_maximal(const GridSpec& spec, std::span<const double> g, double t,
                                                 double a);

[[nodiscard]] ScaleProfile peetre_profile(const GridFunction& f, const CalderonFrame& frame,
                                          const ExponentField& alpha, const ExponentField& p, double a);

[[nodiscard]] BesovNormReport peetre_norm(const GridFunction& f, const CalderonFrame& frame,
                                          const ExponentField& alpha, const ExponentField& p,
                                          const ExponentField& q, double a);

// Requires alpha+ < S + 1 (hypothesis error otherwise).
[[nodiscard]] BesovNormReport local_mean_norm(const GridFunction& f, const LocalMeanPair& pair,
                                              const ScaleLadder& ladder, const ExponentField& alpha,
                                              const ExponentField& p, const ExponentField& q, double a,
                                              LocalMeanVariant variant);

// Mixed l^{q_v}(L^{q(t)}(dt)) norm of the octave blocks t^{-1/q(t)} g(t).
[[nodiscard]] NormResult octave_block_norm(std::span<const double> g, const ExponentField& q,
                                           const ScaleLadder& ladder);

void write_profile_csv(const std::filesystem::path& path, const ScaleProfile& profile);

}  // namespace vbesov
