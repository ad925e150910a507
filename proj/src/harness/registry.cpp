#include <algorithm>
#include <array>
#include <chrono>

#include "vbesov/error.hpp"
#include "vbesov/harness/checks.hpp"
#include "vbesov/parallel.hpp"

namespace vbesov::harness {

namespace {

// Sorted by id.
constexpr std::array<CheckEntry, 10> kChecks{{
    {"atomic", "atomic decomposition round trip and sequence norm", &check_atomic},
    {"embeddings", "elementary, q-monotone and Sobolev-type embeddings", &check_embeddings},
    {"eta_algebra", "convolution algebra of eta kernels", &check_eta_algebra},
    {"hardy", "discrete and continuous Hardy inequalities", &check_hardy},
    {"kernel_decay", "kernel decay from vanishing moments", &check_kernel_decay},
    {"key_modular", "damped mean power against the modular", &check_key_modular},
    {"mixed_equivalence", "ladder mixed norm against the discrete sequence norm", &check_mixed_equivalence},
    {"norm_equivalences", "equivalence of norm forms across frames and local means", &check_norm_equivalences},
    {"pointwise_shift", "pointwise shift of variable smoothness", &check_pointwise_shift},
    {"subconvolution", "r-trick subconvolution bound", &check_subconvolution},
}};

}  // namespace

std::span<const CheckEntry> check_registry() noexcept { return kChecks; }

bool is_check_id(std::string_view id) noexcept {
    return std::any_of(kChecks.begin(), kChecks.end(), [&](const CheckEntry& e) { return e.id == id; });
}

CheckReport run_check(std::string_view id, const HarnessSettings& s) {
    const auto it = std::find_if(kChecks.begin(), kChecks.end(), [&](const CheckEntry& e) { return e.id == id; });
    require(it != kChecks.end(), ErrorKind::parameter, "unknown check '" + std::string(id) + "'");
    const auto start = std::chrono::steady_clock::now();
    CheckReport r = it->run(s);
    r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.id = std::string(it->id);
    r.title = std::string(it->title);
    r.seed = s.seed;
    r.settings = s.to_json();
    return r;
}

std::vector<CheckReport> run_checks(const std::vector<std::string>& ids, const HarnessSettings& s, unsigned jobs) {
    std::vector<std::string> order = ids;
    std::sort(order.begin(), order.end());
    order.erase(std::unique(order.begin(), order.end()), order.end());
    for (const auto& id : order) require(is_check_id(id), ErrorKind::parameter, "unknown check '" + id + "'");

    std::vector<CheckReport> out(order.size());
    if (jobs <= 1) {
        // One check at a time; each keeps its own data-parallel loops.
        for (std::size_t i = 0; i < order.size(); ++i) out[i] = run_check(order[i], s);
        return out;
    }
    const unsigned saved = worker_count();
    set_worker_count(jobs);
    try {
        parallel_for(order.size(), [&](std::size_t i) { out[i] = run_check(order[i], s); });
    } catch (...) {
        set_worker_count(saved);
        throw;
    }
    set_worker_count(saved);
    return out;
}

}  // namespace vbesov::harness
