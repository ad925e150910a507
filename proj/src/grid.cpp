#include "vbesov/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vbesov/error.hpp"
#include "vbesov/fft.hpp"

namespace vbesov {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// (-1)^(k1 + k2): phase that moves the DFT origin from index 0 to x = 0.
double centre_phase(const GridSpec& spec, std::size_t flat) {
    auto idx = spec.index(flat);
    return ((idx[0] + idx[1]) & 1) ? -1.0 : 1.0;
}

}  // namespace

// ===========================================================================
// GridSpec
// ===========================================================================

std::size_t GridSpec::total() const noexcept {
    std::size_t n = static_cast<std::size_t>(points);
    return dimension == 1 ? n : n * n;
}

double GridSpec::cell_volume() const noexcept {
    const double h = spacing();
    return dimension == 1 ? h : h * h;
}

double GridSpec::wavenumber(int k) const noexcept {
    const int signed_k = k < points / 2 ? k : k - points;
    return 2.0 * std::numbers::pi * signed_k / box_length;
}

double GridSpec::nyquist() const noexcept { return std::numbers::pi * points / box_length; }

Point GridSpec::point(std::size_t flat) const noexcept {
    auto idx = index(flat);
    Point p{coordinate(idx[0]), 0.0};
    if (dimension == 2) p[1] = coordinate(idx[1]);
    return p;
}

std::array<int, 2> GridSpec::index(std::size_t flat) const noexcept {
    if (dimension == 1) return {static_cast<int>(flat), 0};
    return {static_cast<int>(flat / points), static_cast<int>(flat % points)};
}

std::size_t GridSpec::flat(int i, int j) const noexcept {
    if (dimension == 1) return static_cast<std::size_t>(i);
    return static_cast<std::size_t>(i) * points + static_cast<std::size_t>(j);
}

GridSpec make_grid(int dimension, double box_length, int points) {
    require(dimension == 1 || dimension == 2, ErrorKind::parameter,
            "grid dimension must be 1 or 2, got " + std::to_string(dimension));
    require(std::isfinite(box_length) && box_length > 0.0, ErrorKind::parameter,
            "box length must be positive and finite");
    require(is_power_of_two(points) && points >= 16, ErrorKind::parameter,
            "grid points per axis must be a power of two >= 16, got " + std::to_string(points));
    require(dimension == 1 || points <= 256, ErrorKind::parameter,
            "two-dimensional grids are limited to 256 points per axis");
    require(points <= (1 << 22), ErrorKind::parameter, "grid too large");
    return GridSpec{dimension, box_length, points};
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
    require(a == b, ErrorKind::grid_mismatch, std::string(what) + ": operands live on different grids");
}

// ===========================================================================
// GridFunction
// ===========================================================================

GridFunction::GridFunction(GridSpec spec, std::vector<cplx> samples, std::string tag)
    : spec_(spec), samples_(std::move(samples)), tag_(std::move(tag)) {
    require(samples_.size() == spec_.total(), ErrorKind::parameter,
            "sample count " + std::to_string(samples_.size()) + " does not match grid size " +
                std::to_string(spec_.total()));
    for (const auto& s : samples_)
        require(std::isfinite(s.real()) && std::isfinite(s.imag()), ErrorKind::parameter,
                "grid function samples must be finite");
}

GridFunction GridFunction::zeros(const GridSpec& spec, std::string tag) {
    return GridFunction(spec, std::vector<cplx>(spec.total()), std::move(tag));
}

GridFunction GridFunction::from_real(const GridSpec& spec, std::vector<double> values, std::string tag) {
    std::vector<cplx> s(values.begin(), values.end());
    return GridFunction(spec, std::move(s), std::move(tag));
}

GridFunction GridFunction::sample(const GridSpec& spec, const std::function<cplx(const Point&)>& f,
                                  std::string tag) {
    std::vector<cplx> s(spec.total());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = f(spec.point(i));
    return GridFunction(spec, std::move(s), std::move(tag));
}

GridFunction GridFunction::sample_real(const GridSpec& spec, const std::function<double(const Point&)>& f,
                                       std::string tag) {
    std::vector<cplx> s(spec.total());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = f(spec.point(i));
    return GridFunction(spec, std::move(s), std::move(tag));
}

std::vector<double> GridFunction::real_part() const {
    std::vector<double> r(samples_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = samples_[i].real();
    return r;
}

std::vector<double> GridFunction::magnitude() const {
    std::vector<double> r(samples_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::abs(samples_[i]);
    return r;
}

double GridFunction::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& s : samples_) m = std::max(m, std::abs(s));
    return m;
}

GridFunction GridFunction::scaled(cplx c) const {
    std::vector<cplx> s(samples_);
    for (auto& v : s) v *= c;
    return GridFunction(spec_, std::move(s), tag_);
}

GridFunction GridFunction::plus(const GridFunction& other) const {
    require_same_grid(spec_, other.spec_, "plus");
    std::vector<cplx> s(samples_);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += other.samples_[i];
    return GridFunction(spec_, std::move(s), tag_);
}

GridFunction GridFunction::minus(const GridFunction& other) const {
    require_same_grid(spec_, other.spec_, "minus");
    std::vector<cplx> s(samples_);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] -= other.samples_[i];
    return GridFunction(spec_, std::move(s), tag_);
}

GridFunction GridFunction::times(std::span<const double> weight) const {
    require(weight.size() == samples_.size(), ErrorKind::grid_mismatch, "times: weight size mismatch");
    std::vector<cplx> s(samples_);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= weight[i];
    return GridFunction(spec_, std::move(s), tag_);
}

GridFunction GridFunction::with_tag(std::string tag) const { return GridFunction(spec_, samples_, std::move(tag)); }

// ===========================================================================
// Spectral operations
// ===========================================================================

std::vector<cplx> spectrum(const GridFunction& f) {
    const auto& spec = f.spec();
    std::vector<cplx> out(spec.total());
    fft::forward(spec, f.samples().data(), out.data());
    const double vol = spec.cell_volume();
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= vol * centre_phase(spec, k);
    return out;
}

GridFunction from_spectrum(const GridSpec& spec, std::vector<cplx> values, std::string tag) {
    require(values.size() == spec.total(), ErrorKind::grid_mismatch, "from_spectrum: size mismatch");
    const double scale = 1.0 / (spec.dimension == 1 ? spec.box_length : spec.box_length * spec.box_length);
    for (std::size_t k = 0; k < values.size(); ++k) values[k] *= scale * centre_phase(spec, k);
    std::vector<cplx> out(spec.total());
    fft::backward(spec, values.data(), out.data());
    return GridFunction(spec, std::move(out), std::move(tag));
}

std::vector<double> radial_frequencies(const GridSpec& spec) {
    std::vector<double> r(spec.total());
    for (std::size_t k = 0; k < r.size(); ++k) {
        auto idx = spec.index(k);
        const double a = spec.wavenumber(idx[0]);
        const double b = spec.dimension == 2 ? spec.wavenumber(idx[1]) : 0.0;
        r[k] = std::hypot(a, b);
    }
    return r;
}

GridFunction apply_multiplier(const GridFunction& f, std::span<const double> multiplier) {
    require(multiplier.size() == f.size(), ErrorKind::grid_mismatch, "apply_multiplier: size mismatch");
    auto s = spectrum(f);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] *= multiplier[k];
    return from_spectrum(f.spec(), std::move(s), f.tag());
}

GridFunction apply_radial_multiplier(const GridFunction& f, const std::function<double(double)>& m) {
    auto r = radial_frequencies(f.spec());
    for (auto& v : r) v = m(v);
    return apply_multiplier(f, r);
}

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f.spec(), g.spec(), "convolve");
    auto a = spectrum(f);
    auto b = spectrum(g);
    for (std::size_t k = 0; k < a.size(); ++k) a[k] *= b[k];
    return from_spectrum(f.spec(), std::move(a), f.tag());
}

GridFunction spectral_derivative(const GridFunction& f, MultiIndex order) {
    const auto& spec = f.spec();
    require(order[0] >= 0 && order[1] >= 0, ErrorKind::parameter, "derivative order must be non-negative");
    require(spec.dimension == 2 || order[1] == 0, ErrorKind::parameter,
            "second derivative component on a one-dimensional grid");
    if (order[0] == 0 && order[1] == 0) return f;
    auto s = spectrum(f);
    const int nyq = spec.points / 2;
    for (std::size_t k = 0; k < s.size(); ++k) {
        auto idx = spec.index(k);
        cplx factor = 1.0;
        for (int d = 0; d < spec.dimension; ++d) {
            if (order[d] == 0) continue;
            if ((order[d] & 1) && idx[d] == nyq) {
                factor = 0.0;
                break;
            }
            factor *= std::pow(cplx(0.0, spec.wavenumber(idx[d])), order[d]);
        }
        s[k] *= factor;
    }
    return from_spectrum(spec, std::move(s), f.tag());
}

double integrate(const GridFunction& f) {
    double acc = 0.0;
    for (const auto& v : f.samples()) acc += v.real();
    return acc * f.spec().cell_volume();
}

double integrate(const GridFunction& f, std::span<const double> weight) {
    require(weight.size() == f.size(), ErrorKind::grid_mismatch, "integrate: weight size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < weight.size(); ++i) {
        require(weight[i] >= 0.0 && std::isfinite(weight[i]), ErrorKind::parameter,
                "integrate: weight must be non-negative and finite");
        acc += f[i].real() * weight[i];
    }
    return acc * f.spec().cell_volume();
}

cplx integrate_complex(const GridFunction& f) {
    cplx acc = 0.0;
    for (const auto& v : f.samples()) acc += v;
    return acc * f.spec().cell_volume();
}

double l2_norm(const GridFunction& f) {
    double acc = 0.0;
    for (const auto& v : f.samples()) acc += std::norm(v);
    return std::sqrt(acc * f.spec().cell_volume());
}

// ===========================================================================
// Dyadic cubes
// ===========================================================================

double DyadicCube::side() const noexcept { return std::ldexp(1.0, -level); }

Point DyadicCube::center() const noexcept {
    const double s = side();
    return {(index[0] + 0.5) * s, (index[1] + 0.5) * s};
}

bool DyadicCube::contains(const Point& x, int dimension) const noexcept {
    for (int d = 0; d < dimension; ++d) {
        const long m = static_cast<long>(std::floor(std::ldexp(x[d], level)));
        if (m != index[d]) return false;
    }
    return true;
}

CubePartition partition_cubes(const GridSpec& spec, int level) {
    require(level >= 0 && level <= 40, ErrorKind::parameter, "cube level out of range");
    CubePartition part;
    part.level = level;
    const std::size_t total = spec.total();
    std::vector<DyadicCube> owner_cube(total);
    for (std::size_t i = 0; i < total; ++i) {
        const Point x = spec.point(i);
        DyadicCube c{level, {0, 0}};
        for (int d = 0; d < spec.dimension; ++d)
            c.index[d] = static_cast<long>(std::floor(std::ldexp(x[d], level)));
        owner_cube[i] = c;
    }
    part.cubes = owner_cube;
    std::sort(part.cubes.begin(), part.cubes.end());
    part.cubes.erase(std::unique(part.cubes.begin(), part.cubes.end()), part.cubes.end());
    part.owner.resize(total);
    part.members.assign(part.cubes.size(), {});
    for (std::size_t i = 0; i < total; ++i) {
        auto it = std::lower_bound(part.cubes.begin(), part.cubes.end(), owner_cube[i]);
        const int pos = static_cast<int>(it - part.cubes.begin());
        part.owner[i] = pos;
        part.members[pos].push_back(i);
    }
    return part;
}

Point periodic_displacement(const GridSpec& spec, const Point& x, const Point& c) noexcept {
    Point d{0.0, 0.0};
    const double L = spec.box_length;
    for (int k = 0; k < spec.dimension; ++k) {
        double v = x[k] - c[k];
        v -= L * std::floor(v / L + 0.5);
        d[k] = v;
    }
    return d;
}

}  // namespace vbesov
