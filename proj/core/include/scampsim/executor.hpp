// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "scampsim/array_state.hpp"
#include "scampsim/program.hpp"

namespace scampsim {

/// Checks every register, mask and pattern reference against the state and
/// the label metadata. Throws Error(program) describing the first problem.
void validate(const PpaProgram& program, const ArrayState& state);

/// Called after each instruction with its index.
using ExecutionObserver =
    std::function<void(std::size_t index, const Instruction& ins, const ArrayState& state)>;

/// Validate-then-execute. Returns one global-sum result per program label, in
/// label order. A rejected program leaves `state` untouched.
std::vector<std::int64_t> execute(const PpaProgram& program, ArrayState& state,
                                  const ExecutionObserver& observer = {});

}  // namespace scampsim
