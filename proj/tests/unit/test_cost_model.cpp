// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "scampsim/cost_model.hpp"
#include "scampsim/error.hpp"
#include "scampsim/lowering.hpp"

namespace scampsim {
namespace {

CostModel uniform(double per_op, double overhead) {
  CostModel c;
  for (Opcode op : kAllOpcodes) c.per_op_us[op] = per_op;
  c.overhead_us = overhead;
  return c;
}

PpaProgram copies(int n) {
  PpaProgram p;
  for (int i = 0; i < n; ++i) p.instructions.push_back(Instruction::copy("A", "B"));
  return p;
}

TEST(Estimate, EmptyProgramIsUnbounded) {
  const TimingReport r = estimate(PpaProgram{}, uniform(1.0, 0.0));
  EXPECT_EQ(r.latency_us, 0.0);
  EXPECT_TRUE(r.unbounded());
  EXPECT_TRUE(std::isinf(r.throughput_fps));
  EXPECT_EQ(r.summary(), "latency_us=0.0 fps=inf");
}

TEST(Estimate, TenInstructionsPlusOverhead) {
  const TimingReport r = estimate(copies(10), uniform(1.0, 2.0));
  EXPECT_DOUBLE_EQ(r.latency_us, 12.0);
  EXPECT_EQ(r.fps_floor(), 83333u);
  EXPECT_EQ(r.total_instructions(), 10u);
  EXPECT_EQ(r.instruction_count.at(Opcode::copy), 10u);
}

TEST(Estimate, OneTwentyOneMicrosecondsFloorsTo8264) {
  const TimingReport r = estimate(PpaProgram{}, uniform(1.0, 121.0));
  EXPECT_EQ(r.fps_floor(), 8264u);
  EXPECT_EQ(r.summary(), "latency_us=121.0 fps=8264");
}

TEST(Estimate, MissingOpcodeNamed) {
  CostModel c = uniform(1.0, 0.0);
  c.per_op_us.erase(Opcode::copy);
  try {
    estimate(copies(1), c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::cost_table);
    EXPECT_NE(std::string(e.what()).find("copy"), std::string::npos);
  }
}

TEST(Estimate, DefaultTableOnDefaultModelGives121) {
  const LoweredProgram lowered = lower_model(default_model());
  const TimingReport r = estimate(lowered.program, CostModel::default_table());
  EXPECT_NEAR(r.latency_us, 121.0, 1e-9);
  EXPECT_EQ(r.fps_floor(), 8264u);
  EXPECT_EQ(r.summary(), "latency_us=121.0 fps=8264");
}

TEST(Properties, ThroughputTimesLatencyIsOneMillion) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> cost(0.0, 5.0);
  const LoweredProgram lowered = lower_model(default_model());
  for (int trial = 0; trial < 500; ++trial) {
    CostModel c;
    for (Opcode op : kAllOpcodes) c.per_op_us[op] = cost(rng);
    c.overhead_us = cost(rng) * 50;
    const TimingReport r = estimate(lowered.program, c);
    ASSERT_GT(r.latency_us, 0.0);
    ASSERT_NEAR(r.throughput_fps * r.latency_us, 1e6, 1e-6);
    ASSERT_EQ(r.fps_floor(), static_cast<std::uint64_t>(std::floor(1e6 / r.latency_us)));
  }
}

TEST(Properties, AppendingNeverDecreasesLatency) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> cost(0.0, 3.0);
  CostModel c;
  for (Opcode op : kAllOpcodes) c.per_op_us[op] = cost(rng);
  c.overhead_us = 1.0;
  PpaProgram p;
  double last = estimate(p, c).latency_us;
  for (int i = 0; i < 200; ++i) {
    const Opcode op = kAllOpcodes[rng() % kAllOpcodes.size()];
    Instruction ins;
    ins.op = op;
    p.instructions.push_back(ins);
    const double now = estimate(p, c).latency_us;
    ASSERT_GE(now, last);
    last = now;
  }
}

TEST(CostTable, JsonRoundTrip) {
  const CostModel c = CostModel::default_table();
  EXPECT_EQ(CostModel::from_json(c.to_json()), c);
}

TEST(CostTable, RejectsBadDocuments) {
  using nlohmann::json;
  const json bad[] = {
      json::array(),
      json{{"add", 1.0}},                                   // no overhead
      json{{"overhead_us", 1.0}, {"teleport", 1.0}},        // unknown key
      json{{"overhead_us", 1.0}, {"add", -0.5}},            // negative
      json{{"overhead_us", -1.0}},
      json{{"overhead_us", 1.0}, {"add", "fast"}},
  };
  for (const auto& doc : bad) {
    try {
      CostModel::from_json(doc);
      FAIL() << doc.dump();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::cost_table) << doc.dump();
    }
  }
  EXPECT_NO_THROW(CostModel::from_json(json{{"overhead_us", 0.0}, {"_note", "comments ok"}}));
}

TEST(CostTable, ShippedFileMatchesBuiltIn) {
  const CostModel file = CostModel::load(SCAMPSIM_SOURCE_DIR "/data/default_cost_table.json");
  EXPECT_EQ(file, CostModel::default_table());
  std::ifstream in(SCAMPSIM_SOURCE_DIR "/data/default_cost_table.json");
  std::stringstream bytes;
  bytes << in.rdbuf();
  EXPECT_EQ(bytes.str(), CostModel::default_table_json());
}

TEST(CostTable, MissingFileIsIoError) {
  try {
    CostModel::load("/nonexistent/table.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::io);
  }
}

}  // namespace
}  // namespace scampsim
