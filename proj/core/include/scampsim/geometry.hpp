// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

namespace scampsim {

/// Pixel layout of the processor array. The plane is tiled row-major into a
/// block_grid x block_grid arrangement of square blocks; each block holds one
/// replica of the (downsampled) input image.
struct PlaneGeometry {
  int height = 256;
  int width = 256;
  int block_grid = 4;
  int block_size = 64;

  /// Throws Error(geometry) unless height = width = block_grid * block_size.
  void validate() const;

  int num_blocks() const { return block_grid * block_grid; }
  std::size_t pixel_count() const {
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) +
           static_cast<std::size_t>(col);
  }
  int block_index(int row, int col) const {
    return block_grid * (row / block_size) + col / block_size;
  }

  static PlaneGeometry tiled(int block_grid, int block_size) {
    return {block_grid * block_size, block_grid * block_size, block_grid, block_size};
  }

  bool operator==(const PlaneGeometry&) const = default;
};

}  // namespace scampsim
