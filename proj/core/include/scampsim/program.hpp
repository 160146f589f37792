// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scampsim/array_state.hpp"
#include "scampsim/geometry.hpp"
#include "scampsim/image.hpp"

namespace scampsim {

enum class Opcode {
  add,
  sub,
  neg,
  copy,
  max,
  shift,
  threshold,
  global_sum,
  d_and,
  d_or,
  d_xor,
  d_not,
  write_pattern,
};

inline constexpr std::array kAllOpcodes = {
    Opcode::add,       Opcode::sub,        Opcode::neg,   Opcode::copy,  Opcode::max,
    Opcode::shift,     Opcode::threshold,  Opcode::global_sum, Opcode::d_and, Opcode::d_or,
    Opcode::d_xor,     Opcode::d_not,      Opcode::write_pattern,
};

std::string_view to_string(Opcode op);
std::optional<Opcode> parse_opcode(std::string_view s);

/// One plane-parallel instruction.
///
/// Operand usage by opcode:
///   add/sub/max      dst a b  [mask]
///   neg/copy         dst a    [mask]
///   shift            dst a    direction steps
///   threshold        dst(digital) a(analog) value
///   global_sum       a        symbol = output label
///   and/or/xor       dst a b  (digital)
///   not              dst a    (digital)
///   write_pattern    dst      symbol = pattern name
struct Instruction {
  Opcode op = Opcode::copy;
  std::string dst;
  std::string a;
  std::string b;
  std::optional<std::string> mask;
  Direction direction = Direction::north;
  int steps = 0;
  std::int64_t value = 0;
  std::string symbol;

  static Instruction add(std::string dst, std::string a, std::string b,
                         std::optional<std::string> mask = {});
  static Instruction sub(std::string dst, std::string a, std::string b,
                         std::optional<std::string> mask = {});
  static Instruction max(std::string dst, std::string a, std::string b,
                         std::optional<std::string> mask = {});
  static Instruction neg(std::string dst, std::string a, std::optional<std::string> mask = {});
  static Instruction copy(std::string dst, std::string a, std::optional<std::string> mask = {});
  static Instruction shift(std::string dst, std::string a, Direction dir, int steps);
  static Instruction threshold(std::string dst, std::string a, std::int64_t t);
  static Instruction global_sum(std::string a, std::string label);
  static Instruction logic(Opcode op, std::string dst, std::string a, std::string b = {});
  static Instruction write_pattern(std::string dst, std::string pattern);

  bool operator==(const Instruction&) const = default;
};

/// An immutable-after-construction instruction stream plus the pattern pool
/// referenced by write_pattern and the ordered output labels.
struct PpaProgram {
  PlaneGeometry geometry{};
  std::vector<std::string> labels;
  std::map<std::string, BitImage> patterns;
  std::vector<Instruction> instructions;

  bool operator==(const PpaProgram&) const = default;
};

/// Text listing, one instruction per line:
///
///   # comment
///   .geometry <height> <width> <block_grid> <block_size>
///   .labels <name>...
///   .pattern <name> <height>x<width> <hex>
///   <opcode> <operands...> [@mask]
///
/// Pattern hex packs each row MSB-first into ceil(width/8) bytes.
std::string disassemble(const PpaProgram& program);
PpaProgram parse_listing(std::string_view text);

std::string format_instruction(const Instruction& ins);

}  // namespace scampsim
