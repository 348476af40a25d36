#pragma once

#include <string>

#include "rotkit/geometry.hpp"

namespace rotkit {

// 8-bit PNG, grayscale (1 channel) or RGB (3 channels). Intensities are
// mapped [0,1] <-> [0,255] with rounding.
void write_png(const std::string& path, const RasterImage& img);
RasterImage read_png(const std::string& path);

// Lossless raw float format: one text header line "width height channels",
// then row-major little-endian 32-bit floats.
void write_raw_float(const std::string& path, const RasterImage& img);
RasterImage read_raw_float(const std::string& path);

}  // namespace rotkit
