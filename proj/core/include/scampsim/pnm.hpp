// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "scampsim/image.hpp"
#include "scampsim/planes.hpp"

namespace scampsim::pnm {

// Byte layout written by this module:
//   PGM: "P5\n<width> <height>\n255\n" followed by width*height bytes, row-major.
//   PBM: "P4\n<width> <height>\n" followed by ceil(width/8) bytes per row,
//        most significant bit first, 1 = set bit, padding bits zero.
// Readers accept '#' comments and arbitrary whitespace in the header. PGM
// readers accept any maxval in [1, 255] and rescale to 0..255.

GrayImage read_pgm(std::istream& in);
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(std::ostream& out, const GrayImage& img);
std::string encode_pgm(const GrayImage& img);

BitImage read_pbm(std::istream& in);
BitImage read_pbm(const std::filesystem::path& path);
void write_pbm(std::ostream& out, const BitImage& img);
std::string encode_pbm(const BitImage& img);

/// Analog planes map to bytes as clamp(v + offset, 0, 255) where offset is 128
/// in saturating mode and 0 in ideal mode.
int analog_offset(AnalogMode mode);
GrayImage analog_to_gray(const AnalogPlane& plane);
AnalogPlane gray_to_analog(const GrayImage& img, const PlaneGeometry& geometry, AnalogMode mode,
                           SaturationRange range = {});

}  // namespace scampsim::pnm
