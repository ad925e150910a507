#include "vbesov/harness/bank.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "vbesov/error.hpp"
#include "vbesov/grid_io.hpp"
#include "vbesov/json_out.hpp"

namespace vbesov::harness {

namespace {

constexpr double pi = std::numbers::pi;

// Radial coordinate in 2-D, the coordinate itself in 1-D.
double coord(const Point& x, int n) { return n == 1 ? x[0] : std::hypot(x[0], x[1]); }
double line(const Point& x, int n) { return n == 1 ? x[0] : (x[0] + x[1]) / std::sqrt(2.0); }

// Trigonometric polynomial with modes 1..kmax along one axis (1-D) or a
// product of two (2-D); coefficients depend only on the seed and the mode.
std::function<double(const Point&)> trig_noise(std::uint64_t seed, int kmax, double L, int n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<double> a(kmax + 1), b(kmax + 1), c(kmax + 1), d(kmax + 1);
    for (int k = 1; k <= kmax; ++k) {
        a[k] = g(rng);
        b[k] = g(rng);
        c[k] = g(rng);
        d[k] = g(rng);
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(kmax));
    return [=](const Point& x) {
        auto axis = [&](double y, const std::vector<double>& u, const std::vector<double>& w) {
            double s = 0.0;
            for (int k = 1; k <= kmax; ++k) s += u[k] * std::cos(2 * pi * k * y / L) + w[k] * std::sin(2 * pi * k * y / L);
            return s * scale;
        };
        return n == 1 ? axis(x[0], a, b) : axis(x[0], a, b) * axis(x[1], c, d);
    };
}

}  // namespace

std::string_view to_string(MemberFamily family) noexcept {
    switch (family) {
        case MemberFamily::gaussian: return "gaussian";
        case MemberFamily::modulated: return "modulated";
        case MemberFamily::weierstrass: return "weierstrass";
        case MemberFamily::indicator: return "indicator";
        case MemberFamily::noise: return "noise";
        case MemberFamily::other: return "other";
    }
    return "other";
}

const BankMember& FunctionBank::at(std::string_view name) const {
    for (const auto& m : members)
        if (m.name == name) return m;
    fail(ErrorKind::parameter, "no bank member named '" + std::string(name) + "'");
}

FunctionBank make_function_bank(const GridSpec& spec, std::uint64_t seed) {
    FunctionBank bank;
    bank.seed = seed;
    bank.spec = spec;
    const int n = spec.dimension;
    const double L = spec.box_length;
    auto add = [&](std::string name, MemberFamily fam, const std::function<double(const Point&)>& fn,
                   std::optional<double> s = {}) {
        bank.members.push_back({name, fam, GridFunction::sample_real(spec, fn, name), s});
    };

    for (double sigma : {0.5, 1.0, 2.0}) {
        add("gauss_" + short_number(sigma), MemberFamily::gaussian, [=](const Point& x) {
            const double r = coord(x, n);
            return std::exp(-r * r / (2 * sigma * sigma));
        });
    }
    for (double w : {4.0, 12.0, 30.0}) {
        add("modulated_" + short_number(w), MemberFamily::modulated, [=](const Point& x) {
            const double r = coord(x, n);
            return std::exp(-r * r / 2) * std::cos(w * line(x, n));
        });
    }
    // Frequencies 2^v 2 pi / L, v = 1..9, periodic on the box.
    for (double s : {0.3, 0.5, 1.2}) {
        add("weierstrass_" + short_number(s), MemberFamily::weierstrass,
            [=](const Point& x) {
                double acc = 0.0;
                for (int v = 1; v <= 9; ++v) acc += std::pow(2.0, -v * s) * std::cos(std::ldexp(2 * pi / L, v) * line(x, n));
                return acc;
            },
            s);
    }
    for (auto [a, delta] : {std::pair{1.0, 0.1}, {2.0, 0.05}, {0.5, 0.2}}) {
        add("indicator_" + short_number(a) + "_" + short_number(delta), MemberFamily::indicator,
            [=](const Point& x) {
                const double r = coord(x, n);
                const double k = 1.0 / (std::sqrt(2.0) * delta);
                return 0.5 * (std::erf((r + a) * k) - std::erf((r - a) * k));
            });
    }
    std::mt19937_64 seeder(seed);
    for (int kmax : {20, 80}) {
        add("noise_" + std::to_string(kmax), MemberFamily::noise, trig_noise(seeder(), kmax, L, n));
    }
    add("gauss_derivative", MemberFamily::other, [=](const Point& x) {
        const double r = coord(x, n);
        return line(x, n) * std::exp(-r * r);
    });
    add("sech", MemberFamily::other, [=](const Point& x) { return 1.0 / std::cosh(coord(x, n)); });
    add("kink", MemberFamily::other, [=](const Point& x) {
        const double r = coord(x, n);
        return std::abs(line(x, n) - 0.3) * std::exp(-r * r / 2);
    });
    add("mexican_hat", MemberFamily::other, [=](const Point& x) {
        const double r = coord(x, n);
        return (1 - r * r) * std::exp(-r * r / 2);
    });
    add("two_bumps", MemberFamily::other, [=](const Point& x) {
        const double y = line(x, n), r = coord(x, n);
        const double o = n == 1 ? 0.0 : r * r - y * y;
        return std::exp(-(y - 3) * (y - 3) - o) + 0.5 * std::exp(-4 * ((y + 2) * (y + 2) + o));
    });
    add("chirp", MemberFamily::other, [=](const Point& x) {
        const double r = coord(x, n);
        return std::exp(-r * r / 4) * std::cos(r * r);
    });
    return bank;
}

double spectral_tail_fraction(const GridFunction& f, double cutoff) {
    const auto F = spectrum(f);
    const auto rad = radial_frequencies(f.spec());
    double all = 0.0, tail = 0.0;
    for (std::size_t k = 0; k < F.size(); ++k) {
        const double e = std::norm(F[k]);
        all += e;
        if (rad[k] > cutoff) tail += e;
    }
    return all > 0.0 ? tail / all : 0.0;
}

ExponentBank make_exponent_bank(const GridSpec& spec, const ScaleLadder& ladder) {
    const double L = spec.box_length;
    auto wave = [L](const Point& x) { return std::sin(2 * pi * x[0] / L); };
    return ExponentBank{
        ExponentField::constant(spec, 2.0, ExponentKind::p, "p=2"),
        ExponentField::sample_on_grid(spec, [&](const Point& x) { return 2.0 + 0.5 * wave(x); }, ExponentKind::p, {},
                                      "p=2+0.5sin"),
        ExponentField::constant(spec, 0.5, ExponentKind::alpha, "alpha=0.5"),
        ExponentField::sample_on_grid(spec, [&](const Point& x) { return 0.2 + 0.5 * wave(x); }, ExponentKind::alpha,
                                      {}, "alpha=0.2+0.5sin"),
        ExponentField::sample_on_t_axis(ladder.t, [](double) { return 2.0; }, 2.0, "q=2"),
        ExponentField::sample_on_t_axis(
            ladder.t, [](double t) { return 2.0 + 1.0 / std::log(std::numbers::e + 1.0 / t); }, 2.0,
            "q=2+1/log(e+1/t)"),
    };
}

double bspline(int d, double x) noexcept {
    if (x <= 0.0 || x >= d + 1) return 0.0;
    double s = 0.0, binom = 1.0, fact = 1.0;
    for (int k = 2; k <= d; ++k) fact *= k;
    for (int i = 0; i <= d + 1; ++i) {
        if (x > i) s += (i % 2 ? -1.0 : 1.0) * binom * std::pow(x - i, d);
        binom = binom * (d + 1 - i) / (i + 1);
    }
    return s / fact;
}

double bspline_derivative(int d, int r, double x) noexcept {
    if (r == 0) return bspline(d, x);
    if (r > d) return 0.0;   // distributional part ignored
    double s = 0.0, binom = 1.0;
    for (int i = 0; i <= r; ++i) {
        s += (i % 2 ? -1.0 : 1.0) * binom * bspline(d - r, x - i);
        binom = binom * (r - i) / (i + 1);
    }
    return s;
}

GridFunction make_spline_atom(const GridSpec& spec, const DyadicCube& cube, int K, int L, double width) {
    require(spec.dimension == 1, ErrorKind::unsupported, "spline atoms are one-dimensional");
    require(K >= 0 && L >= -1 && width > 0.0, ErrorKind::parameter, "spline atom needs K >= 0, L >= -1, width > 0");
    const int d = K + L + 2;
    const int r0 = L + 1;
    const double sigma = (d + 1) / width;
    // kappa: sup_y |D^beta [g(sigma y)]| = sigma^beta sup |g^(beta)| <= 1 for beta <= K
    double worst = 0.0;
    for (int beta = 0; beta <= K; ++beta) {
        double m = 0.0;
        const int samples = 200000;
        for (int i = 0; i <= samples; ++i)
            m = std::max(m, std::abs(bspline_derivative(d, r0 + beta, (d + 1.0) * i / samples)));
        worst = std::max(worst, std::pow(sigma, beta) * m);
    }
    const double kappa = 1.0 / worst;
    const int v = cube.level;
    const double c = cube.center()[0];
    const double amp = kappa * std::pow(2.0, 0.5 * v);
    return GridFunction::sample_real(spec, [=](const Point& x) {
        const double disp = periodic_displacement(spec, x, {c, 0.0})[0];
        const double y = std::ldexp(disp, v);   // cube units, centre at 0
        return amp * bspline_derivative(d, r0, sigma * y + 0.5 * (d + 1));
    }, "spline_atom");
}

void write_bank(const std::filesystem::path& dir, const FunctionBank& bank) {
    std::filesystem::create_directories(dir);
    nlohmann::json index;
    index["seed"] = bank.seed;
    index["dimension"] = bank.spec.dimension;
    index["box_length"] = bank.spec.box_length;
    index["points"] = bank.spec.points;
    index["members"] = nlohmann::json::array();
    for (const auto& m : bank.members) {
        const std::string file = m.name + ".vbgf";
        write_grid_raw(dir / file, m.f);
        nlohmann::json e{{"name", m.name}, {"family", std::string(to_string(m.family))}, {"file", file}};
        e["smoothness"] = m.smoothness ? nlohmann::json(*m.smoothness) : nlohmann::json(nullptr);
        index["members"].push_back(e);
    }
    write_json_file(dir / "index.json", index);
}

}  // namespace vbesov::harness
