// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "scampsim/program.hpp"

namespace scampsim {

/// Per-opcode instruction cost in microseconds plus a fixed per-frame
/// overhead (exposure and readout).
struct CostModel {
  std::map<Opcode, double> per_op_us;
  double overhead_us = 0.0;

  /// Keys are opcode names plus "overhead_us"; keys starting with '_' are
  /// comments. Unknown keys and negative costs are rejected.
  static CostModel from_json(const nlohmann::json& doc);
  static CostModel load(const std::string& path);
  nlohmann::json to_json() const;

  /// The shipped table, fitted so the default three-class lowered program
  /// costs 121 us end to end.
  static CostModel default_table();
  static const char* default_table_json();

  bool operator==(const CostModel&) const = default;
};

struct TimingReport {
  std::map<Opcode, std::size_t> instruction_count;
  double latency_us = 0.0;
  /// 1e6 / latency_us; +infinity for a zero-latency program.
  double throughput_fps = 0.0;

  bool unbounded() const { return latency_us <= 0.0; }
  /// Integer frames per second as printed: floor(1e6 / latency).
  std::uint64_t fps_floor() const;
  std::size_t total_instructions() const;
  /// "latency_us=<x> fps=<n>" with n = fps_floor() or "inf".
  std::string summary() const;
  nlohmann::json to_json() const;
};

/// latency = overhead + sum of per-instruction costs. Throws Error(cost_table)
/// naming the first opcode used by the program that has no cost entry.
TimingReport estimate(const PpaProgram& program, const CostModel& cost);

std::string format_us(double us);

}  // namespace scampsim
