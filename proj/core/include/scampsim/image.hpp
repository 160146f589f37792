// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace scampsim {

/// 8-bit grayscale raster, row-major.
struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int h, int w, std::uint8_t fill = 0)
      : height(h), width(w), pixels(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill) {}

  std::uint8_t at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * width + c]; }
  std::uint8_t& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * width + c]; }

  bool operator==(const GrayImage&) const = default;
};

/// Binary raster with values exactly 0 or 1, row-major.
struct BitImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> bits;

  BitImage() = default;
  BitImage(int h, int w, std::uint8_t fill = 0)
      : height(h), width(w), bits(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), fill) {}

  std::uint8_t at(int r, int c) const { return bits[static_cast<std::size_t>(r) * width + c]; }
  std::uint8_t& at(int r, int c) { return bits[static_cast<std::size_t>(r) * width + c]; }

  bool is_binary() const {
    for (auto b : bits) {
      if (b > 1) return false;
    }
    return true;
  }
  std::size_t count_ones() const {
    std::size_t n = 0;
    for (auto b : bits) n += b;
    return n;
  }

  bool operator==(const BitImage&) const = default;
};

}  // namespace scampsim
