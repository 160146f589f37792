// SPDX-License-Identifier: Apache-2.0
#include "scampsim/array_state.hpp"

#include <cmath>
#include <set>
#include <vector>

#include "scampsim/error.hpp"

namespace scampsim {
namespace {

[[noreturn]] void unknown_register(std::string_view bank, std::string_view name) {
  throw Error(ErrorKind::register_name,
              "unknown " + std::string(bank) + " register '" + std::string(name) + "'");
}

}  // namespace

std::string_view to_string(Direction dir) {
  switch (dir) {
    case Direction::north: return "N";
    case Direction::south: return "S";
    case Direction::east: return "E";
    case Direction::west: return "W";
  }
  return "?";
}

std::optional<Direction> parse_direction(std::string_view s) {
  if (s == "N") return Direction::north;
  if (s == "S") return Direction::south;
  if (s == "E") return Direction::east;
  if (s == "W") return Direction::west;
  return std::nullopt;
}

ArrayState::ArrayState(const ArrayConfig& config)
    : config_(config), geometry_(config.geometry), mode_(config.mode), noise_(config.noise) {
  geometry_.validate();
  std::set<std::string> seen;
  for (const auto& name : config.registers.analog) {
    if (name.empty() || !seen.insert(name).second) {
      throw Error(ErrorKind::config, "duplicate or empty analog register name '" + name + "'");
    }
    analog_.emplace(name, AnalogPlane(geometry_, mode_, config.range));
  }
  seen.clear();
  for (const auto& name : config.registers.digital) {
    if (name.empty() || name == kFlagRegister || !seen.insert(name).second) {
      throw Error(ErrorKind::config, "duplicate or reserved digital register name '" + name + "'");
    }
    digital_.emplace(name, DigitalPlane(geometry_));
  }
  digital_.emplace(std::string(kFlagRegister), DigitalPlane(geometry_));
}

bool ArrayState::has_analog(std::string_view name) const { return analog_.contains(name); }
bool ArrayState::has_digital(std::string_view name) const { return digital_.contains(name); }

AnalogPlane& ArrayState::analog(std::string_view name) {
  auto it = analog_.find(name);
  if (it == analog_.end()) unknown_register("analog", name);
  return it->second;
}
const AnalogPlane& ArrayState::analog(std::string_view name) const {
  auto it = analog_.find(name);
  if (it == analog_.end()) unknown_register("analog", name);
  return it->second;
}
DigitalPlane& ArrayState::digital(std::string_view name) {
  auto it = digital_.find(name);
  if (it == digital_.end()) unknown_register("digital", name);
  return it->second;
}
const DigitalPlane& ArrayState::digital(std::string_view name) const {
  auto it = digital_.find(name);
  if (it == digital_.end()) unknown_register("digital", name);
  return it->second;
}

void ArrayState::load_image(const GrayImage& img, std::string_view dest, double scale,
                            double offset) {
  if (img.height != geometry_.height || img.width != geometry_.width) {
    throw Error(ErrorKind::geometry,
                "image " + std::to_string(img.height) + "x" + std::to_string(img.width) +
                    " does not match plane " + std::to_string(geometry_.height) + "x" +
                    std::to_string(geometry_.width));
  }
  auto& plane = analog(dest);
  auto v = plane.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = plane.clamp(std::llround(img.pixels[i] * scale + offset));
  }
}

const std::uint8_t* ArrayState::mask_bits(Mask mask) const {
  if (!mask) return nullptr;
  return digital(*mask).bits().data();
}

template <typename Fn>
void ArrayState::apply_binary(std::string_view dst, std::string_view a, std::string_view b,
                              Mask mask, Fn fn) {
  const std::uint8_t* m = mask_bits(mask);
  auto& out = analog(dst);
  const auto pa = analog(a).values();
  const auto pb = analog(b).values();
  auto po = out.values();
  const std::size_t n = po.size();
  if (m == nullptr) {
    for (std::size_t i = 0; i < n; ++i) po[i] = out.clamp(fn(pa[i], pb[i]));
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t v = out.clamp(fn(pa[i], pb[i]));
      po[i] = m[i] ? v : po[i];
    }
  }
}

void ArrayState::add(std::string_view dst, std::string_view a, std::string_view b, Mask mask) {
  apply_binary(dst, a, b, mask, [](std::int64_t x, std::int64_t y) { return x + y; });
}

void ArrayState::sub(std::string_view dst, std::string_view a, std::string_view b, Mask mask) {
  apply_binary(dst, a, b, mask, [](std::int64_t x, std::int64_t y) { return x - y; });
}

void ArrayState::neg(std::string_view dst, std::string_view a, Mask mask) {
  apply_binary(dst, a, a, mask, [](std::int64_t x, std::int64_t) { return -x; });
}

void ArrayState::copy(std::string_view dst, std::string_view a, Mask mask) {
  apply_binary(dst, a, a, mask, [](std::int64_t x, std::int64_t) { return x; });
}

void ArrayState::max_combine(std::string_view dst, std::string_view a, std::string_view b,
                             Mask mask) {
  apply_binary(dst, a, b, mask, [](std::int64_t x, std::int64_t y) { return x > y ? x : y; });
}

void ArrayState::shift(std::string_view dst, std::string_view src, Direction dir, int steps) {
  if (steps < 0) throw Error(ErrorKind::program, "shift steps must be >= 0");
  const auto& in = analog(src);
  auto& out = analog(dst);
  const int h = geometry_.height;
  const int w = geometry_.width;
  int dr = 0;
  int dc = 0;
  switch (dir) {
    case Direction::north: dr = steps; break;
    case Direction::south: dr = -steps; break;
    case Direction::east: dc = -steps; break;
    case Direction::west: dc = steps; break;
  }
  // Work on a copy so src == dst is well-defined.
  std::vector<std::int64_t> tmp(geometry_.pixel_count(), out.clamp(0));
  const auto pin = in.values();
  for (int r = 0; r < h; ++r) {
    const int sr = r + dr;
    if (sr < 0 || sr >= h) continue;
    const int c0 = std::max(0, -dc);
    const int c1 = std::min(w, w - dc);
    const std::int64_t* srow = pin.data() + geometry_.index(sr, 0);
    std::int64_t* drow = tmp.data() + geometry_.index(r, 0);
    for (int c = c0; c < c1; ++c) drow[c] = srow[c + dc];
  }
  std::copy(tmp.begin(), tmp.end(), out.values().begin());
}

void ArrayState::threshold(std::string_view dst, std::string_view src, std::int64_t t) {
  auto& out = digital(dst);
  const auto pin = analog(src).values();
  auto po = out.bits();
  for (std::size_t i = 0; i < po.size(); ++i) po[i] = pin[i] > t ? 1 : 0;
}

void ArrayState::dreg_logic(std::string_view dst, std::string_view a, std::string_view b,
                            LogicOp op) {
  auto& out = digital(dst);
  const auto pa = digital(a).bits();
  const auto pb = digital(b).bits();
  auto po = out.bits();
  const std::size_t n = po.size();
  switch (op) {
    case LogicOp::op_and:
      for (std::size_t i = 0; i < n; ++i) po[i] = pa[i] & pb[i];
      break;
    case LogicOp::op_or:
      for (std::size_t i = 0; i < n; ++i) po[i] = pa[i] | pb[i];
      break;
    case LogicOp::op_xor:
      for (std::size_t i = 0; i < n; ++i) po[i] = pa[i] ^ pb[i];
      break;
    case LogicOp::op_not:
      for (std::size_t i = 0; i < n; ++i) po[i] = pa[i] ^ 1;
      break;
  }
}

void ArrayState::write_pattern(std::string_view dst, const BitImage& pattern) {
  auto& out = digital(dst);
  out = DigitalPlane::from_bits(geometry_, pattern);
}

std::int64_t ArrayState::global_sum(std::string_view src) {
  return scampsim::global_sum(analog(src), noise_);
}

bool ArrayState::operator==(const ArrayState& other) const {
  return geometry_ == other.geometry_ && mode_ == other.mode_ && analog_ == other.analog_ &&
         digital_ == other.digital_;
}

}  // namespace scampsim
