// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "scampsim/geometry.hpp"
#include "scampsim/image.hpp"

namespace scampsim {

enum class AnalogMode { ideal, saturating };

struct SaturationRange {
  std::int64_t min = -128;
  std::int64_t max = 127;
  bool operator==(const SaturationRange&) const = default;
};

/// Integer model of an analog register plane (PIX / AREG). In saturating mode
/// every stored value lies in [range.min, range.max]; ideal mode is unbounded
/// up to int64.
class AnalogPlane {
 public:
  explicit AnalogPlane(PlaneGeometry geometry, AnalogMode mode = AnalogMode::ideal,
                       SaturationRange range = {});

  const PlaneGeometry& geometry() const { return geometry_; }
  AnalogMode mode() const { return mode_; }
  const SaturationRange& range() const { return range_; }

  std::int64_t at(int r, int c) const { return values_[geometry_.index(r, c)]; }
  void set(int r, int c, std::int64_t v) { values_[geometry_.index(r, c)] = clamp(v); }

  std::span<std::int64_t> values() { return values_; }
  std::span<const std::int64_t> values() const { return values_; }

  std::int64_t clamp(std::int64_t v) const {
    return mode_ == AnalogMode::saturating ? std::clamp(v, range_.min, range_.max) : v;
  }
  void fill(std::int64_t v) { std::fill(values_.begin(), values_.end(), clamp(v)); }

  bool operator==(const AnalogPlane&) const = default;

 private:
  PlaneGeometry geometry_;
  AnalogMode mode_;
  SaturationRange range_;
  std::vector<std::int64_t> values_;
};

/// One bit per pixel (DREG). Stored unpacked as 0/1 bytes.
class DigitalPlane {
 public:
  explicit DigitalPlane(PlaneGeometry geometry, std::uint8_t fill = 0);
  static DigitalPlane from_bits(PlaneGeometry geometry, const BitImage& bits);

  const PlaneGeometry& geometry() const { return geometry_; }
  std::uint8_t at(int r, int c) const { return bits_[geometry_.index(r, c)]; }
  void set(int r, int c, bool v) { bits_[geometry_.index(r, c)] = v ? 1 : 0; }

  std::span<std::uint8_t> bits() { return bits_; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  std::size_t count() const;
  BitImage to_bits() const;

  bool operator==(const DigitalPlane&) const = default;

 private:
  PlaneGeometry geometry_;
  std::vector<std::uint8_t> bits_;
};

/// Bit = 1 where value > t.
DigitalPlane threshold(const AnalogPlane& plane, std::int64_t t);

enum class NoiseKind { none, gaussian };

struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  bool operator==(const NoiseModel&) const = default;
};

/// Stateful sampler for global-sum readout error. Draws are a pure function of
/// the seed and the number of previous draws.
class NoiseSource {
 public:
  NoiseSource() = default;
  explicit NoiseSource(NoiseModel model) : model_(model), rng_(model.seed) {}

  const NoiseModel& model() const { return model_; }
  std::int64_t perturb(std::int64_t exact);

 private:
  NoiseModel model_;
  std::mt19937_64 rng_;
};

/// Exact integer sum of all pixels, plus a rounded Gaussian draw when the
/// source is noisy.
std::int64_t global_sum(const AnalogPlane& plane, NoiseSource& noise);
std::int64_t exact_sum(const AnalogPlane& plane);

}  // namespace scampsim
