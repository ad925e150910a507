#include <cmath>
#include <numbers>

#include "vbesov/error.hpp"
#include "vbesov/lebesgue.hpp"

namespace vbesov {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    require(n >= 1 && n <= 512, ErrorKind::parameter, "Gauss-Legendre order out of range");
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Recompute the derivative at the converged root for the weight.
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double wt = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wt;
        w[n - 1 - i] = wt;
    }
    if (n % 2 == 1) x[n / 2] = 0.0;
}

ScaleLadder make_ladder(int octaves, int nodes_per_octave, LadderRule rule) {
    require(octaves >= 1 && octaves <= 60, ErrorKind::parameter, "ladder octaves must be in [1, 60]");
    require(nodes_per_octave >= 1 && nodes_per_octave <= 512, ErrorKind::parameter,
            "ladder nodes per octave must be in [1, 512]");
    ScaleLadder L;
    L.octaves = octaves;
    L.nodes_per_octave = nodes_per_octave;
    L.rule = rule;
    std::vector<double> x, w;
    if (rule == LadderRule::gauss_legendre) {
        gauss_legendre(nodes_per_octave, x, w);
    } else {
        x.resize(nodes_per_octave);
        w.assign(nodes_per_octave, 2.0 / nodes_per_octave);
        for (int j = 0; j < nodes_per_octave; ++j) x[j] = -1.0 + (2.0 * j + 1.0) / nodes_per_octave;
    }
    const double ln2 = std::numbers::ln2;
    for (int v = 1; v <= octaves; ++v) {
        // log2 t runs over [-v, 1 - v]; emit nodes from the top of the octave down.
        for (int j = nodes_per_octave - 1; j >= 0; --j) {
            const double log2t = -v + 0.5 * (x[j] + 1.0);
            L.t.push_back(std::exp2(log2t));
            L.w.push_back(0.5 * ln2 * w[j]);
            L.octave.push_back(v);
        }
    }
    validate_ladder(L);
    return L;
}

void validate_ladder(const ScaleLadder& L) {
    require(L.t.size() == L.w.size() && L.t.size() == L.octave.size() &&
                L.t.size() == static_cast<std::size_t>(L.octaves) * L.nodes_per_octave,
            ErrorKind::construction, "ladder arrays are inconsistent");
    for (std::size_t k = 0; k < L.t.size(); ++k) {
        require(L.t[k] > 0.0 && L.t[k] <= 1.0, ErrorKind::construction, "ladder node outside (0, 1]");
        require(L.w[k] > 0.0, ErrorKind::construction, "ladder weight must be positive");
        if (k > 0) require(L.t[k] < L.t[k - 1], ErrorKind::construction, "ladder nodes must strictly decrease");
    }
    for (int v = 1; v <= L.octaves; ++v) {
        double s = 0.0;
        for (std::size_t k = L.octave_begin(v); k < L.octave_end(v); ++k) {
            require(L.octave[k] == v, ErrorKind::construction, "ladder octave labels are inconsistent");
            s += L.w[k];
        }
        require(std::abs(s - std::numbers::ln2) <= 1e-12, ErrorKind::construction,
                "ladder weights of an octave must sum to log 2");
    }
}

}  // namespace vbesov
