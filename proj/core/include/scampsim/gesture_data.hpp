// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "scampsim/image.hpp"

namespace scampsim {

inline const std::vector<std::string> kGestureClasses{"rock", "paper", "scissors"};
inline constexpr int kSampleSide = 64;

/// Per-sample random perturbations applied to the class prototypes.
struct JitterParams {
  double rotation_deg = 25.0;
  double translation_px = 6.0;
  double scale_frac = 0.15;
  /// Probability of flipping each pixel that lies on the shape boundary.
  double boundary_noise = 0.05;

  static JitterParams none() { return {0.0, 0.0, 0.0, 0.0}; }
  nlohmann::json to_json() const;
  static JitterParams from_json(const nlohmann::json& doc);
  bool operator==(const JitterParams&) const = default;
};

struct SampleProvenance {
  enum class Kind { synthetic, file };
  Kind kind = Kind::synthetic;
  std::uint64_t seed = 0;  // synthetic: derived per-sample seed
  std::string path;        // file: source path
  bool operator==(const SampleProvenance&) const = default;
};

struct GestureSample {
  BitImage image;
  int label = 0;
  SampleProvenance provenance;
  bool operator==(const GestureSample&) const = default;
};

struct DatasetSplit {
  std::vector<GestureSample> train;
  std::vector<GestureSample> test;
  std::uint64_t seed = 0;
  JitterParams jitter{};
  std::vector<std::string> class_names = kGestureClasses;

  std::vector<std::size_t> class_counts(const std::vector<GestureSample>& samples) const;
  bool operator==(const DatasetSplit&) const = default;
};

/// Rasterizes one class prototype. rotation in degrees, translation in
/// pixels, scale as a multiplier.
BitImage render_gesture(int label, double rotation_deg, double tx, double ty, double scale);

/// Balanced synthetic rock / paper / scissors set. Every sample's RNG is
/// seeded from (seed, split, class, index), so regeneration is bit-exact and
/// the two splits draw from disjoint streams.
DatasetSplit generate(std::uint64_t seed, int n_train_per_class, int n_test_per_class,
                      const JitterParams& jitter = {});

/// Reads class-named subdirectories of PGM files. If `root` contains train/
/// or test/ subdirectories they are read as the respective splits; otherwise
/// every sample lands in the test split. Images go through host_prep. Any
/// unreadable file or unknown class directory aborts with an itemized report.
DatasetSplit ingest(const std::filesystem::path& root,
                    const std::vector<std::string>& class_names = kGestureClasses);

/// (relative path, file bytes) for every file export_dataset writes.
std::vector<std::pair<std::string, std::string>> dataset_files(const DatasetSplit& data);

/// Writes <dir>/{train,test}/<class>/<index>.pgm (0/255) and manifest.json.
void export_dataset(const DatasetSplit& data, const std::filesystem::path& dir);
/// Reads a directory written by export_dataset.
DatasetSplit load_dataset(const std::filesystem::path& dir);

nlohmann::json manifest_json(const DatasetSplit& data);

GrayImage to_gray(const BitImage& img);

}  // namespace scampsim
