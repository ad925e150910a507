#include <cmath>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "vbesov/error.hpp"
#include "vbesov/grid_io.hpp"

using namespace vbesov;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "vbesov_test_grid_io";
    fs::create_directories(dir);
    return dir / name;
}

GridFunction sample(int dim) {
    const auto spec = make_grid(dim, 12.0, dim == 1 ? 128 : 32);
    return GridFunction::sample(spec, [](const Point& x) {
        return cplx(std::exp(-x[0] * x[0]) * std::cos(3 * x[1]), 1.0 / 3.0 * std::sin(x[0]));
    });
}

void expect_same(const GridFunction& a, const GridFunction& b) {
    ASSERT_EQ(a.spec(), b.spec());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].real(), b[i].real());
        EXPECT_EQ(a[i].imag(), b[i].imag());
    }
}

}  // namespace

TEST(GridIo, RawRoundTripIsBitExact) {
    for (int dim : {1, 2}) {
        const auto f = sample(dim);
        const auto path = scratch("f" + std::to_string(dim) + ".vbgf");
        write_grid_raw(path, f);
        expect_same(f, read_grid_raw(path));
    }
}

TEST(GridIo, CsvRoundTripIsBitExact) {
    for (int dim : {1, 2}) {
        const auto f = sample(dim);
        const auto path = scratch("f" + std::to_string(dim) + ".csv");
        write_grid_csv(path, f);
        expect_same(f, read_grid_csv(path));
    }
}

TEST(GridIo, RawHeaderLayout) {
    const auto f = sample(1);
    const auto path = scratch("hdr.vbgf");
    write_grid_raw(path, f);
    EXPECT_EQ(fs::file_size(path), 4u + 3 * 4 + 8 + 16 * f.size());
    std::ifstream is(path, std::ios::binary);
    char magic[4];
    is.read(magic, 4);
    EXPECT_EQ(std::string(magic, 4), "VBGF");
}

TEST(GridIo, Failures) {
    const auto bad = scratch("bad.vbgf");
    std::ofstream(bad) << "nope";
    try {
        (void)read_grid_raw(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::io);
    }
    const auto csv = scratch("bad.csv");
    std::ofstream(csv) << "a,b\n1,2\n";
    EXPECT_THROW((void)read_grid_csv(csv), Error);
    EXPECT_THROW((void)read_grid_raw(scratch("missing.vbgf")), Error);
}
