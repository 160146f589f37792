// SPDX-License-Identifier: Apache-2.0
#include "scampsim/executor.hpp"

#include <map>
#include <set>

#include "scampsim/error.hpp"

namespace scampsim {
namespace {

[[noreturn]] void reject(std::size_t index, const Instruction& ins, const std::string& why) {
  throw Error(ErrorKind::program, "instruction " + std::to_string(index) + " (" +
                                      format_instruction(ins) + "): " + why);
}

}  // namespace

void validate(const PpaProgram& program, const ArrayState& state) {
  if (!(program.geometry == state.geometry())) {
    throw Error(ErrorKind::program, "program geometry does not match array geometry");
  }
  std::set<std::string> labels;
  for (const auto& l : program.labels) {
    if (!labels.insert(l).second) throw Error(ErrorKind::program, "duplicate label '" + l + "'");
  }
  for (const auto& [name, img] : program.patterns) {
    if (img.height != state.geometry().height || img.width != state.geometry().width) {
      throw Error(ErrorKind::program, "pattern '" + name + "' does not match array geometry");
    }
  }
  std::set<std::string> summed;
  for (std::size_t i = 0; i < program.instructions.size(); ++i) {
    const auto& ins = program.instructions[i];
    auto need_analog = [&](const std::string& name) {
      if (!state.has_analog(name)) reject(i, ins, "unknown analog register '" + name + "'");
    };
    auto need_digital = [&](const std::string& name) {
      if (!state.has_digital(name)) reject(i, ins, "unknown digital register '" + name + "'");
    };
    if (ins.mask) {
      const bool maskable = ins.op == Opcode::add || ins.op == Opcode::sub ||
                            ins.op == Opcode::max || ins.op == Opcode::neg ||
                            ins.op == Opcode::copy;
      if (!maskable) reject(i, ins, "opcode takes no mask");
      need_digital(*ins.mask);
    }
    switch (ins.op) {
      case Opcode::add:
      case Opcode::sub:
      case Opcode::max:
        need_analog(ins.dst);
        need_analog(ins.a);
        need_analog(ins.b);
        break;
      case Opcode::neg:
      case Opcode::copy:
        need_analog(ins.dst);
        need_analog(ins.a);
        break;
      case Opcode::shift:
        need_analog(ins.dst);
        need_analog(ins.a);
        if (ins.steps < 0) reject(i, ins, "negative shift");
        break;
      case Opcode::threshold:
        need_digital(ins.dst);
        need_analog(ins.a);
        break;
      case Opcode::global_sum:
        need_analog(ins.a);
        if (!labels.contains(ins.symbol)) reject(i, ins, "label not declared in metadata");
        summed.insert(ins.symbol);
        break;
      case Opcode::d_and:
      case Opcode::d_or:
      case Opcode::d_xor:
        need_digital(ins.dst);
        need_digital(ins.a);
        need_digital(ins.b);
        break;
      case Opcode::d_not:
        need_digital(ins.dst);
        need_digital(ins.a);
        break;
      case Opcode::write_pattern:
        need_digital(ins.dst);
        if (!program.patterns.contains(ins.symbol)) {
          reject(i, ins, "unknown pattern '" + ins.symbol + "'");
        }
        break;
    }
  }
  for (const auto& l : program.labels) {
    if (!summed.contains(l)) {
      throw Error(ErrorKind::program, "label '" + l + "' has no global_sum instruction");
    }
  }
}

std::vector<std::int64_t> execute(const PpaProgram& program, ArrayState& state,
                                  const ExecutionObserver& observer) {
  validate(program, state);
  std::map<std::string, std::int64_t, std::less<>> sums;
  for (std::size_t i = 0; i < program.instructions.size(); ++i) {
    const auto& ins = program.instructions[i];
    ArrayState::Mask mask;
    if (ins.mask) mask = *ins.mask;
    switch (ins.op) {
      case Opcode::add: state.add(ins.dst, ins.a, ins.b, mask); break;
      case Opcode::sub: state.sub(ins.dst, ins.a, ins.b, mask); break;
      case Opcode::max: state.max_combine(ins.dst, ins.a, ins.b, mask); break;
      case Opcode::neg: state.neg(ins.dst, ins.a, mask); break;
      case Opcode::copy: state.copy(ins.dst, ins.a, mask); break;
      case Opcode::shift: state.shift(ins.dst, ins.a, ins.direction, ins.steps); break;
      case Opcode::threshold: state.threshold(ins.dst, ins.a, ins.value); break;
      case Opcode::global_sum: sums[ins.symbol] = state.global_sum(ins.a); break;
      case Opcode::d_and: state.dreg_logic(ins.dst, ins.a, ins.b, LogicOp::op_and); break;
      case Opcode::d_or: state.dreg_logic(ins.dst, ins.a, ins.b, LogicOp::op_or); break;
      case Opcode::d_xor: state.dreg_logic(ins.dst, ins.a, ins.b, LogicOp::op_xor); break;
      case Opcode::d_not: state.dreg_logic(ins.dst, ins.a, ins.a, LogicOp::op_not); break;
      case Opcode::write_pattern:
        state.write_pattern(ins.dst, program.patterns.find(ins.symbol)->second);
        break;
    }
    if (observer) observer(i, ins, state);
  }
  std::vector<std::int64_t> out;
  out.reserve(program.labels.size());
  for (const auto& l : program.labels) out.push_back(sums.at(l));
  return out;
}

}  // namespace scampsim
