// SPDX-License-Identifier: Apache-2.0
#include "scampsim/program.hpp"

namespace scampsim {

std::string_view to_string(Opcode op) {
  switch (op) {
    case Opcode::add: return "add";
    case Opcode::sub: return "sub";
    case Opcode::neg: return "neg";
    case Opcode::copy: return "copy";
    case Opcode::max: return "max";
    case Opcode::shift: return "shift";
    case Opcode::threshold: return "threshold";
    case Opcode::global_sum: return "global_sum";
    case Opcode::d_and: return "and";
    case Opcode::d_or: return "or";
    case Opcode::d_xor: return "xor";
    case Opcode::d_not: return "not";
    case Opcode::write_pattern: return "write_pattern";
  }
  return "?";
}

std::optional<Opcode> parse_opcode(std::string_view s) {
  for (Opcode op : kAllOpcodes) {
    if (to_string(op) == s) return op;
  }
  return std::nullopt;
}

Instruction Instruction::add(std::string dst, std::string a, std::string b,
                             std::optional<std::string> mask) {
  Instruction i;
  i.op = Opcode::add;
  i.dst = std::move(dst);
  i.a = std::move(a);
  i.b = std::move(b);
  i.mask = std::move(mask);
  return i;
}

Instruction Instruction::sub(std::string dst, std::string a, std::string b,
                             std::optional<std::string> mask) {
  Instruction i = add(std::move(dst), std::move(a), std::move(b), std::move(mask));
  i.op = Opcode::sub;
  return i;
}

Instruction Instruction::max(std::string dst, std::string a, std::string b,
                             std::optional<std::string> mask) {
  Instruction i = add(std::move(dst), std::move(a), std::move(b), std::move(mask));
  i.op = Opcode::max;
  return i;
}

Instruction Instruction::neg(std::string dst, std::string a, std::optional<std::string> mask) {
  Instruction i;
  i.op = Opcode::neg;
  i.dst = std::move(dst);
  i.a = std::move(a);
  i.mask = std::move(mask);
  return i;
}

Instruction Instruction::copy(std::string dst, std::string a, std::optional<std::string> mask) {
  Instruction i = neg(std::move(dst), std::move(a), std::move(mask));
  i.op = Opcode::copy;
  return i;
}

Instruction Instruction::shift(std::string dst, std::string a, Direction dir, int steps) {
  Instruction i;
  i.op = Opcode::shift;
  i.dst = std::move(dst);
  i.a = std::move(a);
  i.direction = dir;
  i.steps = steps;
  return i;
}

Instruction Instruction::threshold(std::string dst, std::string a, std::int64_t t) {
  Instruction i;
  i.op = Opcode::threshold;
  i.dst = std::move(dst);
  i.a = std::move(a);
  i.value = t;
  return i;
}

Instruction Instruction::global_sum(std::string a, std::string label) {
  Instruction i;
  i.op = Opcode::global_sum;
  i.a = std::move(a);
  i.symbol = std::move(label);
  return i;
}

Instruction Instruction::logic(Opcode op, std::string dst, std::string a, std::string b) {
  Instruction i;
  i.op = op;
  i.dst = std::move(dst);
  i.a = std::move(a);
  if (op != Opcode::d_not) i.b = std::move(b);
  return i;
}

Instruction Instruction::write_pattern(std::string dst, std::string pattern) {
  Instruction i;
  i.op = Opcode::write_pattern;
  i.dst = std::move(dst);
  i.symbol = std::move(pattern);
  return i;
}

}  // namespace scampsim
