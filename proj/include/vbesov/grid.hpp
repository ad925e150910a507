#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace vbesov {

using cplx = std::complex<double>;
using Point = std::array<double, 2>;      // second component unused when n = 1
using MultiIndex = std::array<int, 2>;

// Uniform periodic grid on the box [-L/2, L/2)^n with N points per axis.
struct GridSpec {
    int dimension = 1;
    double box_length = 16.0;
    int points = 4096;

    [[nodiscard]] std::size_t total() const noexcept;
    [[nodiscard]] double spacing() const noexcept { return box_length / points; }
    [[nodiscard]] double cell_volume() const noexcept;
    [[nodiscard]] double coordinate(int i) const noexcept { return -0.5 * box_length + i * spacing(); }
    // Signed angular wavenumber of FFT bin k: 2*pi*k'/L with k' in [-N/2, N/2).
    [[nodiscard]] double wavenumber(int k) const noexcept;
    [[nodiscard]] double nyquist() const noexcept;
    [[nodiscard]] Point point(std::size_t flat) const noexcept;
    [[nodiscard]] std::array<int, 2> index(std::size_t flat) const noexcept;
    [[nodiscard]] std::size_t flat(int i, int j = 0) const noexcept;

    bool operator==(const GridSpec&) const = default;
};

[[nodiscard]] GridSpec make_grid(int dimension, double box_length, int points);

// Throws grid_mismatch when the two specs differ.
void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

class GridFunction {
public:
    GridFunction(GridSpec spec, std::vector<cplx> samples, std::string tag = {});

    [[nodiscard]] static GridFunction zeros(const GridSpec& spec, std::string tag = {});
    [[nodiscard]] static GridFunction from_real(const GridSpec& spec, std::vector<double> values,
                                                std::string tag = {});
    [[nodiscard]] static GridFunction sample(const GridSpec& spec,
                                             const std::function<cplx(const Point&)>& f,
                                             std::string tag = {});
    [[nodiscard]] static GridFunction sample_real(const GridSpec& spec,
                                                  const std::function<double(const Point&)>& f,
                                                  std::string tag = {});

    [[nodiscard]] const GridSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] std::span<const cplx> samples() const noexcept { return samples_; }
    [[nodiscard]] const cplx& operator[](std::size_t i) const noexcept { return samples_[i]; }
    [[nodiscard]] std::size_t size() const noexcept { return samples_.size(); }
    [[nodiscard]] const std::string& tag() const noexcept { return tag_; }

    [[nodiscard]] std::vector<double> real_part() const;
    [[nodiscard]] std::vector<double> magnitude() const;
    [[nodiscard]] double max_abs() const noexcept;

    [[nodiscard]] GridFunction scaled(cplx c) const;
    [[nodiscard]] GridFunction plus(const GridFunction& other) const;
    [[nodiscard]] GridFunction minus(const GridFunction& other) const;
    [[nodiscard]] GridFunction times(std::span<const double> weight) const;
    [[nodiscard]] GridFunction with_tag(std::string tag) const;

private:
    GridSpec spec_;
    std::vector<cplx> samples_;
    std::string tag_;
};

// ---------------------------------------------------------------------------
// Spectral operations.  spectrum() approximates the continuous transform
//   F f(xi_k) = int f(x) exp(-i x.xi_k) dx
// at the grid wavenumbers; from_spectrum() is its exact discrete inverse.
// ---------------------------------------------------------------------------

[[nodiscard]] std::vector<cplx> spectrum(const GridFunction& f);
[[nodiscard]] GridFunction from_spectrum(const GridSpec& spec, std::vector<cplx> spec_values,
                                         std::string tag = {});

// |xi| at every spectral bin, in the same flat layout as spectrum().
[[nodiscard]] std::vector<double> radial_frequencies(const GridSpec& spec);

[[nodiscard]] GridFunction apply_multiplier(const GridFunction& f, std::span<const double> multiplier);
[[nodiscard]] GridFunction apply_radial_multiplier(const GridFunction& f,
                                                   const std::function<double(double)>& m);

// Periodic convolution (f * g)(x) = int f(y) g(x - y) dy on the box.
[[nodiscard]] GridFunction convolve(const GridFunction& f, const GridFunction& g);

[[nodiscard]] GridFunction spectral_derivative(const GridFunction& f, MultiIndex order);

// Real part of h^n * sum f w.  Weight must be non-negative.
[[nodiscard]] double integrate(const GridFunction& f);
[[nodiscard]] double integrate(const GridFunction& f, std::span<const double> weight);
[[nodiscard]] cplx integrate_complex(const GridFunction& f);

[[nodiscard]] double l2_norm(const GridFunction& f);

// ---------------------------------------------------------------------------
// Dyadic cubes  Q_{v,m} = prod [m_i 2^-v, (m_i + 1) 2^-v), clipped to the box.
// ---------------------------------------------------------------------------

struct DyadicCube {
    int level = 0;
    std::array<long, 2> index{0, 0};

    [[nodiscard]] double side() const noexcept;
    [[nodiscard]] Point center() const noexcept;
    [[nodiscard]] bool contains(const Point& x, int dimension) const noexcept;

    auto operator<=>(const DyadicCube&) const = default;
};

// Cube owning each grid point at level v; every grid point belongs to exactly one cube.
struct CubePartition {
    int level = 0;
    std::vector<DyadicCube> cubes;           // sorted
    std::vector<int> owner;                  // grid flat index -> position in cubes
    std::vector<std::vector<std::size_t>> members;
};

[[nodiscard]] CubePartition partition_cubes(const GridSpec& spec, int level);

// Periodic displacement x - c wrapped into [-L/2, L/2) per axis.
[[nodiscard]] Point periodic_displacement(const GridSpec& spec, const Point& x, const Point& c) noexcept;

}  // namespace vbesov
