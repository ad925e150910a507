#pragma once

#include <filesystem>

#include "vbesov/grid.hpp"

namespace vbesov {

// CSV layout: header "x,re,im" (or "x,y,re,im"), one row per grid point in
// flat order, coordinates printed with 17 significant digits.
void write_grid_csv(const std::filesystem::path& path, const GridFunction& f);
[[nodiscard]] GridFunction read_grid_csv(const std::filesystem::path& path);

// Raw binary layout, little-endian:
//   "VBGF" | u32 version (=1) | u32 n | u32 N | f64 L | N^n pairs of f64 (re, im)
void write_grid_raw(const std::filesystem::path& path, const GridFunction& f);
[[nodiscard]] GridFunction read_grid_raw(const std::filesystem::path& path);

}  // namespace vbesov
