// SPDX-License-Identifier: Apache-2.0
#include "scampsim/cost_model.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "scampsim/error.hpp"

namespace scampsim {
namespace {

// Analog ALU ops and neighbour transfers take a quarter microsecond, digital
// logic an eighth, a DREG pattern load half a microsecond and a global-sum
// readout two. The default program (k=4, 16 blocks, 3 classes) uses 44.625 us
// of instructions; overhead_us = 121 - 44.625 is the calibration constant.
constexpr const char* kDefaultTable = R"({
  "_calibration": "overhead_us fitted so the default 3-class lowered program totals 121 us; per-op costs are modelled, not measured",
  "add": 0.25,
  "sub": 0.25,
  "neg": 0.25,
  "copy": 0.25,
  "max": 0.5,
  "shift": 0.25,
  "threshold": 0.25,
  "global_sum": 2.0,
  "and": 0.125,
  "or": 0.125,
  "xor": 0.125,
  "not": 0.125,
  "write_pattern": 0.5,
  "overhead_us": 76.375
}
)";

}  // namespace

CostModel CostModel::from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::cost_table, "cost table must be a JSON object");
  CostModel model;
  bool have_overhead = false;
  for (const auto& [key, value] : doc.items()) {
    if (!key.empty() && key[0] == '_') continue;
    if (!value.is_number()) {
      throw Error(ErrorKind::cost_table, "cost for '" + key + "' is not a number");
    }
    const double v = value.get<double>();
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorKind::cost_table, "cost for '" + key + "' must be finite and >= 0");
    }
    if (key == "overhead_us") {
      model.overhead_us = v;
      have_overhead = true;
      continue;
    }
    auto op = parse_opcode(key);
    if (!op) throw Error(ErrorKind::cost_table, "unknown opcode '" + key + "' in cost table");
    model.per_op_us[*op] = v;
  }
  if (!have_overhead) throw Error(ErrorKind::cost_table, "cost table lacks 'overhead_us'");
  return model;
}

CostModel CostModel::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open cost table " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::cost_table, path + ": " + e.what());
  }
  return from_json(doc);
}

nlohmann::json CostModel::to_json() const {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [op, us] : per_op_us) doc[std::string(to_string(op))] = us;
  doc["overhead_us"] = overhead_us;
  return doc;
}

const char* CostModel::default_table_json() { return kDefaultTable; }

CostModel CostModel::default_table() { return from_json(nlohmann::json::parse(kDefaultTable)); }

std::uint64_t TimingReport::fps_floor() const {
  if (unbounded()) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(std::floor(throughput_fps));
}

std::size_t TimingReport::total_instructions() const {
  std::size_t n = 0;
  for (const auto& [op, c] : instruction_count) n += c;
  return n;
}

std::string format_us(double us) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << us;
  std::string s = os.str();
  while (s.size() > 1 && s.back() == '0' && s[s.size() - 2] != '.') s.pop_back();
  return s;
}

std::string TimingReport::summary() const {
  std::string fps = unbounded() ? "inf" : std::to_string(fps_floor());
  return "latency_us=" + format_us(latency_us) + " fps=" + fps;
}

nlohmann::json TimingReport::to_json() const {
  nlohmann::json doc;
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [op, c] : instruction_count) counts[std::string(to_string(op))] = c;
  doc["instruction_count"] = counts;
  doc["latency_us"] = latency_us;
  if (unbounded()) {
    doc["throughput_fps"] = "inf";
  } else {
    doc["throughput_fps"] = throughput_fps;
    doc["fps"] = fps_floor();
  }
  return doc;
}

TimingReport estimate(const PpaProgram& program, const CostModel& cost) {
  TimingReport report;
  for (const auto& ins : program.instructions) ++report.instruction_count[ins.op];
  double latency = cost.overhead_us;
  for (const auto& ins : program.instructions) {
    auto it = cost.per_op_us.find(ins.op);
    if (it == cost.per_op_us.end()) {
      throw Error(ErrorKind::cost_table,
                  "cost table has no entry for opcode '" + std::string(to_string(ins.op)) + "'");
    }
    latency += it->second;
  }
  report.latency_us = latency;
  report.throughput_fps =
      latency > 0.0 ? 1e6 / latency : std::numeric_limits<double>::infinity();
  return report;
}

}  // namespace scampsim
