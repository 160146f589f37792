// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scampsim/geometry.hpp"
#include "scampsim/image.hpp"
#include "scampsim/planes.hpp"

namespace scampsim {

enum class Direction { north, south, east, west };

enum class LogicOp { op_and, op_or, op_xor, op_not };

/// Register bank names. "FLAG" is reserved for the conditional-execution
/// plane and is addressable as a digital register in addition to the bank.
struct RegisterFileConfig {
  std::vector<std::string> analog{"A", "B", "C", "D", "E", "F", "PIX"};
  std::vector<std::string> digital{"R1", "R2", "R3", "R4",  "R5",  "R6",
                                   "R7", "R8", "R9", "R10", "R11", "R12"};
};

inline constexpr std::string_view kFlagRegister = "FLAG";

struct ArrayConfig {
  PlaneGeometry geometry{};
  AnalogMode mode = AnalogMode::ideal;
  SaturationRange range{};
  RegisterFileConfig registers{};
  NoiseModel noise{};
};

/// Whole-array register file plus the global-sum noise source. Every
/// operation is plane-parallel; masked variants leave pixels whose mask bit is
/// 0 untouched.
class ArrayState {
 public:
  explicit ArrayState(const ArrayConfig& config = {});

  const PlaneGeometry& geometry() const { return geometry_; }
  AnalogMode mode() const { return mode_; }
  const ArrayConfig& config() const { return config_; }

  bool has_analog(std::string_view name) const;
  bool has_digital(std::string_view name) const;

  AnalogPlane& analog(std::string_view name);
  const AnalogPlane& analog(std::string_view name) const;
  DigitalPlane& digital(std::string_view name);
  const DigitalPlane& digital(std::string_view name) const;

  const std::map<std::string, AnalogPlane, std::less<>>& analog_bank() const { return analog_; }
  const std::map<std::string, DigitalPlane, std::less<>>& digital_bank() const { return digital_; }

  /// dest <- round(pixel * scale + offset), clamped in saturating mode.
  void load_image(const GrayImage& img, std::string_view dest, double scale = 1.0,
                  double offset = 0.0);

  using Mask = std::optional<std::string_view>;

  void add(std::string_view dst, std::string_view a, std::string_view b, Mask mask = {});
  void sub(std::string_view dst, std::string_view a, std::string_view b, Mask mask = {});
  void neg(std::string_view dst, std::string_view a, Mask mask = {});
  void copy(std::string_view dst, std::string_view a, Mask mask = {});
  void max_combine(std::string_view dst, std::string_view a, std::string_view b, Mask mask = {});

  /// dst(r,c) = src(r + dr*steps, c + dc*steps) where (dr,dc) is the source
  /// offset of the direction: north moves content up, so dst(r,c)=src(r+1,c)
  /// per step. Pixels arriving from outside the array are zero.
  void shift(std::string_view dst, std::string_view src, Direction dir, int steps);

  /// Digital dst <- (analog src > t).
  void threshold(std::string_view dst, std::string_view src, std::int64_t t);
  void dreg_logic(std::string_view dst, std::string_view a, std::string_view b, LogicOp op);
  void write_pattern(std::string_view dst, const BitImage& pattern);

  std::int64_t global_sum(std::string_view src);

  bool operator==(const ArrayState& other) const;

 private:
  template <typename Fn>
  void apply_binary(std::string_view dst, std::string_view a, std::string_view b, Mask mask, Fn fn);

  const std::uint8_t* mask_bits(Mask mask) const;

  ArrayConfig config_;
  PlaneGeometry geometry_;
  AnalogMode mode_;
  std::map<std::string, AnalogPlane, std::less<>> analog_;
  std::map<std::string, DigitalPlane, std::less<>> digital_;
  NoiseSource noise_;
};

std::string_view to_string(Direction dir);
std::optional<Direction> parse_direction(std::string_view s);

}  // namespace scampsim
