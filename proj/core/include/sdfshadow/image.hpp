#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sdfshadow/field.hpp"

namespace sdfshadow {

/// Single-channel linear images share ScalarImage with field slices.
ScalarImage make_image(int width, int height, float fill = 0.0f);

/// Portable float map: grayscale ("Pf"), little-endian, rows bottom to top.
void write_pfm(std::ostream& out, const ScalarImage& img);
void write_pfm(const std::string& path, const ScalarImage& img);
/// Reads "Pf" or "PF" (color channels averaged) in either byte order.
ScalarImage read_pfm(std::istream& in);
ScalarImage read_pfm(const std::string& path);

/// 8-bit preview, gamma 2.2, values clamped to [0, 1].
void write_ppm(const std::string& path, const ScalarImage& img);
void write_ppm_rgb(const std::string& path, int width, int height, const std::vector<std::uint8_t>& rgb);

}  // namespace sdfshadow
