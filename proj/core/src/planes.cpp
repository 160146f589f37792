// SPDX-License-Identifier: Apache-2.0
#include "scampsim/planes.hpp"

#include <cmath>
#include <numeric>

#include "scampsim/error.hpp"

namespace scampsim {

AnalogPlane::AnalogPlane(PlaneGeometry geometry, AnalogMode mode, SaturationRange range)
    : geometry_(geometry), mode_(mode), range_(range), values_(geometry.pixel_count(), 0) {
  if (range_.min > range_.max) {
    throw Error(ErrorKind::config, "saturation range has min > max");
  }
  values_.assign(geometry.pixel_count(), clamp(0));
}

DigitalPlane::DigitalPlane(PlaneGeometry geometry, std::uint8_t fill)
    : geometry_(geometry), bits_(geometry.pixel_count(), fill ? 1 : 0) {}

DigitalPlane DigitalPlane::from_bits(PlaneGeometry geometry, const BitImage& bits) {
  if (bits.height != geometry.height || bits.width != geometry.width) {
    throw Error(ErrorKind::geometry,
                "pattern " + std::to_string(bits.height) + "x" + std::to_string(bits.width) +
                    " does not match plane " + std::to_string(geometry.height) + "x" +
                    std::to_string(geometry.width));
  }
  DigitalPlane plane(geometry);
  for (std::size_t i = 0; i < bits.bits.size(); ++i) plane.bits_[i] = bits.bits[i] ? 1 : 0;
  return plane;
}

std::size_t DigitalPlane::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BitImage DigitalPlane::to_bits() const {
  BitImage img(geometry_.height, geometry_.width);
  img.bits = bits_;
  return img;
}

DigitalPlane threshold(const AnalogPlane& plane, std::int64_t t) {
  DigitalPlane out(plane.geometry());
  auto src = plane.values();
  auto dst = out.bits();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] > t ? 1 : 0;
  return out;
}

std::int64_t NoiseSource::perturb(std::int64_t exact) {
  if (model_.kind == NoiseKind::none || model_.sigma <= 0.0) return exact;
  std::normal_distribution<double> dist(0.0, model_.sigma);
  return exact + static_cast<std::int64_t>(std::llround(dist(rng_)));
}

std::int64_t exact_sum(const AnalogPlane& plane) {
  auto v = plane.values();
  return std::accumulate(v.begin(), v.end(), std::int64_t{0});
}

std::int64_t global_sum(const AnalogPlane& plane, NoiseSource& noise) {
  return noise.perturb(exact_sum(plane));
}

}  // namespace scampsim
