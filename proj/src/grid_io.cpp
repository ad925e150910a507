#include "vbesov/grid_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "vbesov/error.hpp"

namespace vbesov {

namespace {

static_assert(std::endian::native == std::endian::little, "raw grid format assumes a little-endian host");

constexpr char kMagic[4] = {'V', 'B', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is, const std::string& path) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    require(static_cast<bool>(is), ErrorKind::io, "truncated raw grid file " + path);
    return v;
}

std::vector<double> split_numbers(const std::string& line, const std::string& path, int line_no) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        require(end != cell.c_str(), ErrorKind::io,
                path + ":" + std::to_string(line_no) + ": not a number: '" + cell + "'");
        out.push_back(v);
    }
    return out;
}

}  // namespace

void write_grid_csv(const std::filesystem::path& path, const GridFunction& f) {
    std::ofstream os(path);
    require(static_cast<bool>(os), ErrorKind::io, "cannot open " + path.string() + " for writing");
    const auto& spec = f.spec();
    os << (spec.dimension == 1 ? "x,re,im\n" : "x,y,re,im\n");
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Point p = spec.point(i);
        os << fmt17(p[0]) << ',';
        if (spec.dimension == 2) os << fmt17(p[1]) << ',';
        os << fmt17(f[i].real()) << ',' << fmt17(f[i].imag()) << '\n';
    }
    require(static_cast<bool>(os), ErrorKind::io, "write failed for " + path.string());
}

GridFunction read_grid_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    require(static_cast<bool>(is), ErrorKind::io, "cannot open " + path.string());
    std::string header;
    std::getline(is, header);
    int dim = 0;
    if (header == "x,re,im") dim = 1;
    else if (header == "x,y,re,im") dim = 2;
    else fail(ErrorKind::io, path.string() + ": unrecognised CSV header '" + header + "'");

    std::vector<Point> coords;
    std::vector<cplx> values;
    std::string line;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto v = split_numbers(line, path.string(), line_no);
        require(static_cast<int>(v.size()) == dim + 2, ErrorKind::io,
                path.string() + ":" + std::to_string(line_no) + ": wrong column count");
        coords.push_back({v[0], dim == 2 ? v[1] : 0.0});
        values.emplace_back(v[dim], v[dim + 1]);
    }
    const std::size_t count = values.size();
    const int N = dim == 1 ? static_cast<int>(count) : static_cast<int>(std::lround(std::sqrt(double(count))));
    require(count >= 2 && (dim == 1 || static_cast<std::size_t>(N) * N == count), ErrorKind::io,
            path.string() + ": sample count is not a full grid");
    // The first sample sits at -L/2 on every axis.
    const double L = -2.0 * coords[0][0];
    require(L > 0.0, ErrorKind::io, path.string() + ": first coordinate must be -L/2");
    const GridSpec spec = make_grid(dim, L, N);
    for (std::size_t i = 0; i < count; ++i) {
        const Point p = spec.point(i);
        for (int d = 0; d < dim; ++d)
            require(std::abs(p[d] - coords[i][d]) <= 1e-9 * spec.box_length, ErrorKind::io,
                    path.string() + ": coordinates do not form the centred uniform grid");
    }
    return GridFunction(spec, std::move(values), path.stem().string());
}

void write_grid_raw(const std::filesystem::path& path, const GridFunction& f) {
    std::ofstream os(path, std::ios::binary);
    require(static_cast<bool>(os), ErrorKind::io, "cannot open " + path.string() + " for writing");
    const auto& spec = f.spec();
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(spec.dimension));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(spec.points));
    put<double>(os, spec.box_length);
    for (const auto& v : f.samples()) {
        put<double>(os, v.real());
        put<double>(os, v.imag());
    }
    require(static_cast<bool>(os), ErrorKind::io, "write failed for " + path.string());
}

GridFunction read_grid_raw(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    require(static_cast<bool>(is), ErrorKind::io, "cannot open " + path.string());
    const std::string p = path.string();
    char magic[4];
    is.read(magic, 4);
    require(static_cast<bool>(is) && std::memcmp(magic, kMagic, 4) == 0, ErrorKind::io,
            p + ": bad magic, not a raw grid file");
    const auto version = get<std::uint32_t>(is, p);
    require(version == kVersion, ErrorKind::io, p + ": unsupported version " + std::to_string(version));
    const auto dim = get<std::uint32_t>(is, p);
    const auto N = get<std::uint32_t>(is, p);
    const auto L = get<double>(is, p);
    const GridSpec spec = make_grid(static_cast<int>(dim), L, static_cast<int>(N));
    std::vector<cplx> values(spec.total());
    for (auto& v : values) {
        const double re = get<double>(is, p);
        const double im = get<double>(is, p);
        v = {re, im};
    }
    return GridFunction(spec, std::move(values), path.stem().string());
}

}  // namespace vbesov
