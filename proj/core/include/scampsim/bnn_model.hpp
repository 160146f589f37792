// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scampsim/geometry.hpp"
#include "scampsim/image.hpp"

namespace scampsim {

/// Single-conv-layer binary CNN: one k x k kernel per block, ReLU, 2x2 max
/// pool, then a per-class {-1,+1} fully-connected layer over the pooled
/// features of all blocks.
///
/// Kernel tap (dy, dx) multiplies input(r + dy, c + dx) when producing
/// output (r, c); outputs whose window leaves the block are forced to zero.
struct BnnModel {
  static constexpr int kWeightsVersion = 1;

  PlaneGeometry geometry{};
  int k = 4;
  /// [block][dy * k + dx]
  std::vector<std::vector<std::int8_t>> kernels;
  std::vector<std::string> class_names{"rock", "paper", "scissors"};
  /// [class][block * pooled_side^2 + i * pooled_side + j]
  std::vector<std::vector<std::int8_t>> fc;

  int num_classes() const { return static_cast<int>(class_names.size()); }
  int num_blocks() const { return geometry.num_blocks(); }
  int pooled_side() const { return geometry.block_size / 2; }
  std::size_t features_per_class() const {
    return static_cast<std::size_t>(num_blocks()) * pooled_side() * pooled_side();
  }

  std::int8_t kernel(int block, int dy, int dx) const { return kernels[block][dy * k + dx]; }
  std::int8_t fc_weight(int cls, int block, int i, int j) const {
    return fc[cls][(static_cast<std::size_t>(block) * pooled_side() + i) * pooled_side() + j];
  }

  /// Throws Error(weights) naming the offending field.
  void validate() const;

  bool operator==(const BnnModel&) const = default;
};

/// Uniform random {-1,+1} weights.
BnnModel make_random_model(std::uint64_t seed, PlaneGeometry geometry = {}, int k = 4,
                           std::vector<std::string> class_names = {"rock", "paper", "scissors"});

/// The model used when no weights are supplied: make_random_model(0).
BnnModel default_model();

/// blocks x side x side integer tensor.
struct FeatureTensor {
  int blocks = 0;
  int side = 0;
  std::vector<std::int64_t> values;

  FeatureTensor() = default;
  FeatureTensor(int b, int s)
      : blocks(b), side(s), values(static_cast<std::size_t>(b) * s * s, 0) {}

  std::int64_t at(int b, int r, int c) const {
    return values[(static_cast<std::size_t>(b) * side + r) * side + c];
  }
  std::int64_t& at(int b, int r, int c) {
    return values[(static_cast<std::size_t>(b) * side + r) * side + c];
  }
  bool operator==(const FeatureTensor&) const = default;
};

struct ClassScores {
  std::vector<std::int64_t> scores;
  int predicted = 0;
  bool operator==(const ClassScores&) const = default;
};

/// Intermediate tensors of a reference inference.
struct InferenceTrace {
  FeatureTensor conv;    // post-conv with border zeroing, blocks x bs x bs
  FeatureTensor relu;    // blocks x bs x bs
  FeatureTensor pooled;  // blocks x bs/2 x bs/2
};

/// Smallest index attaining the maximum. Throws on an empty list.
int argmax(std::span<const std::int64_t> scores);

/// Dense oracle inference on a block_size x block_size binary image.
ClassScores reference_infer(const BnnModel& model, const BitImage& input,
                            InferenceTrace* trace = nullptr);

/// Weights document: version, k, block_size, block_grid, classes, kernels
/// (blocks x k x k), fc (classes x blocks x side x side).
nlohmann::json save_weights(const BnnModel& model);
BnnModel load_weights(const nlohmann::json& doc);
BnnModel load_weights_file(const std::filesystem::path& path);

}  // namespace scampsim
