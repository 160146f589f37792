// SPDX-License-Identifier: Apache-2.0
#include "scampsim/geometry.hpp"

#include <string>

#include "scampsim/error.hpp"

namespace scampsim {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::register_name: return "register";
    case ErrorKind::program: return "program";
    case ErrorKind::cost_table: return "cost_table";
    case ErrorKind::format: return "format";
    case ErrorKind::weights: return "weights";
    case ErrorKind::lowering: return "lowering";
    case ErrorKind::dataset: return "dataset";
    case ErrorKind::config: return "config";
    case ErrorKind::servo: return "servo";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

void PlaneGeometry::validate() const {
  if (block_grid <= 0 || block_size <= 0) {
    throw Error(ErrorKind::geometry, "block_grid and block_size must be positive");
  }
  if (height != block_grid * block_size || width != block_grid * block_size) {
    throw Error(ErrorKind::geometry,
                "plane " + std::to_string(height) + "x" + std::to_string(width) +
                    " is not tiled by a " + std::to_string(block_grid) + "x" +
                    std::to_string(block_grid) + " grid of " + std::to_string(block_size) +
                    "-pixel blocks");
  }
}

}  // namespace scampsim
