// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "scampsim/error.hpp"
#include "scampsim/servo.hpp"

namespace scampsim {
namespace {

const ServoBank kOne({ServoModel{}});
constexpr std::int64_t kLatency = 121;
constexpr std::int64_t kPeriod = 3003;

std::vector<TimelineEvent> of_kind(const ServoTimeline& tl, EventKind k) {
  std::vector<TimelineEvent> out;
  for (const auto& e : tl.events)
    if (e.kind == k) out.push_back(e);
  return out;
}

TEST(ServoModel, PulseMapping) {
  const ServoModel s;
  EXPECT_DOUBLE_EQ(s.pulse_width_us(0), 1000);
  EXPECT_DOUBLE_EQ(s.pulse_width_us(90), 1500);
  EXPECT_DOUBLE_EQ(s.pulse_width_us(180), 2000);
  EXPECT_DOUBLE_EQ(s.pulse_width_us(400), 2000);
  EXPECT_DOUBLE_EQ(s.pulse_width_us(-10), 1000);
  EXPECT_DOUBLE_EQ(s.angle_for_pulse(1250), 45);
  EXPECT_NEAR(s.max_step_deg(), 1.8018, 1e-9);
  EXPECT_DOUBLE_EQ(s.target_for_class(2), 180);
  EXPECT_THROW(s.target_for_class(3), Error);
}

TEST(ServoBank, AtMostFive) {
  EXPECT_NO_THROW(ServoBank(std::vector<ServoModel>(5)));
  try {
    ServoBank(std::vector<ServoModel>(6));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::servo);
  }
  EXPECT_THROW(ServoBank(std::vector<ServoModel>{}), Error);
  std::vector<ServoModel> mixed(2);
  mixed[1].pwm_period_us = 2000;
  EXPECT_THROW(ServoBank{mixed}, Error);
}

TEST(Loop, FirstFrameLatchesAtNextEdge) {
  const std::vector<ClassifiedFrame> frames{{0, 1}};
  const ServoTimeline tl = simulate_loop(frames, kLatency, kOne, 10000);
  const auto updates = of_kind(tl, EventKind::angle_update);
  ASSERT_FALSE(updates.empty());
  EXPECT_EQ(updates.front().t_us, 3003);
  EXPECT_EQ(updates.front().frame_index, 0);
  const auto r = reaction_latency(tl);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].reaction_us, 3003);
}

TEST(Loop, LateFrameArithmetic) {
  const std::vector<ClassifiedFrame> frames{{2900, 2}};
  const ServoTimeline tl = simulate_loop(frames, kLatency, kOne, 10000);
  const auto done = of_kind(tl, EventKind::inference_done);
  ASSERT_EQ(done.size(), 1u);
  EXPECT_EQ(done[0].t_us, 3021);
  const auto r = reaction_latency(tl);
  EXPECT_EQ(r[0].reaction_us, 3106);
}

TEST(Loop, NoFramesOnlyEdges) {
  const ServoTimeline tl = simulate_loop({}, kLatency, kOne, 30030);
  ASSERT_EQ(tl.events.size(), 11u);
  for (std::size_t i = 0; i < tl.events.size(); ++i) {
    EXPECT_EQ(tl.events[i].kind, EventKind::pwm_edge);
    EXPECT_EQ(tl.events[i].t_us, static_cast<std::int64_t>(i) * kPeriod);
  }
}

TEST(Loop, LastWriterWinsWithinPeriod) {
  const std::vector<ClassifiedFrame> frames{{100, 1}, {500, 2}};
  const ServoTimeline tl = simulate_loop(frames, kLatency, kOne, 10000);
  const auto updates = of_kind(tl, EventKind::angle_update);
  ASSERT_FALSE(updates.empty());
  EXPECT_EQ(updates.front().frame_index, 1);
  EXPECT_EQ(updates.front().class_index, 2);
  const auto r = reaction_latency(tl);
  EXPECT_EQ(r[0].fate, FrameFate::dropped);
  EXPECT_EQ(r[1].fate, FrameFate::latched);
}

TEST(Loop, PendingWhenLatchFallsAfterEnd) {
  const std::vector<ClassifiedFrame> frames{{5000, 1}};
  const auto r = reaction_latency(simulate_loop(frames, kLatency, kOne, 5500));
  EXPECT_EQ(r[0].fate, FrameFate::pending);
  EXPECT_FALSE(r[0].reaction_us);
}

TEST(Loop, RejectsBadFrames) {
  const std::vector<ClassifiedFrame> backwards{{10, 0}, {5, 0}};
  EXPECT_THROW(simulate_loop(backwards, kLatency, kOne, 100), Error);
  const std::vector<ClassifiedFrame> late{{200, 0}};
  EXPECT_THROW(simulate_loop(late, kLatency, kOne, 100), Error);
  EXPECT_THROW(simulate_loop({}, -1, kOne, 100), Error);
}

TEST(Loop, EveryServoFollows) {
  const ServoBank bank(std::vector<ServoModel>(3));
  const std::vector<ClassifiedFrame> frames{{0, 1}};
  const ServoTimeline tl = simulate_loop(frames, kLatency, bank, 3003);
  const auto updates = of_kind(tl, EventKind::angle_update);
  ASSERT_EQ(updates.size(), 3u);
  for (int s = 0; s < 3; ++s) {
    EXPECT_EQ(updates[s].servo_id, s);
    EXPECT_NEAR(*updates[s].angle, 1.8018, 1e-9);
  }
}

TEST(Loop, CsvShape) {
  const std::vector<ClassifiedFrame> frames{{0, 2}};
  const std::string csv = simulate_loop(frames, kLatency, kOne, 3003).to_csv();
  EXPECT_EQ(csv,
            "t_us,event,servo_id,class,angle\n"
            "0,frame,,,\n"
            "0,pwm_edge,,,\n"
            "121,inference_done,,2,\n"
            "3003,pwm_edge,,,\n"
            "3003,angle_update,0,2,1.8018\n");
}

TEST(Properties, BoundedReactionOverEveryPhase) {
  std::int64_t lo = INT64_MAX, hi = 0, worst_phase = -1;
  for (std::int64_t phase = 0; phase < kPeriod; ++phase) {
    const std::vector<ClassifiedFrame> frames{{kPeriod + phase, 1}};
    const auto r = reaction_latency(simulate_loop(frames, kLatency, kOne, 4 * kPeriod));
    ASSERT_EQ(r[0].fate, FrameFate::latched);
    const std::int64_t v = *r[0].reaction_us;
    ASSERT_GE(v, kLatency);
    ASSERT_LE(v, kLatency + kPeriod);
    lo = std::min(lo, v);
    if (v > hi) {
      hi = v;
      worst_phase = phase;
    }
  }
  EXPECT_EQ(lo, kLatency + 1);
  // Inference finishing exactly on an edge waits for the following one.
  EXPECT_EQ(hi, kLatency + kPeriod);
  EXPECT_EQ(worst_phase, kPeriod - kLatency);
}

TEST(Properties, SlewLimitHolds) {
  std::mt19937_64 rng(3);
  const ServoBank bank(std::vector<ServoModel>(2));
  std::vector<ClassifiedFrame> frames;
  for (std::int64_t t = 0; t < 2'000'000; t += 1000 + static_cast<std::int64_t>(rng() % 20000)) {
    frames.push_back({t, static_cast<int>(rng() % 3)});
  }
  const ServoTimeline tl = simulate_loop(frames, kLatency, bank, 2'000'000);
  const double step = ServoModel{}.max_step_deg();
  std::vector<double> last(2, 0.0);
  std::vector<std::int64_t> last_t(2, 0);
  for (const auto& e : of_kind(tl, EventKind::angle_update)) {
    const std::int64_t periods = (e.t_us - last_t[e.servo_id]) / kPeriod;
    ASSERT_LE(std::abs(*e.angle - last[e.servo_id]), step * std::max<std::int64_t>(periods, 1) + 1e-9);
    last[e.servo_id] = *e.angle;
    last_t[e.servo_id] = e.t_us;
  }
}

TEST(Properties, MostFramesNeverLatchAtFullRate) {
  std::vector<ClassifiedFrame> frames;
  for (std::int64_t i = 0;; ++i) {
    const auto t = static_cast<std::int64_t>(std::floor(static_cast<double>(i) * 1e6 / 8264.0));
    if (t >= 1'000'000) break;
    frames.push_back({t, static_cast<int>(i % 3)});
  }
  const LoopSummary s = summarize(simulate_loop(frames, kLatency, kOne, 1'000'000));
  EXPECT_EQ(s.frames, 8264u);
  const double never = static_cast<double>(s.dropped + s.pending) / static_cast<double>(s.frames);
  EXPECT_GE(never, 1.0 - 333.0 / 8264.0 - 1.0 / 8264.0);
  EXPECT_NEAR(static_cast<double>(s.latched), 333.0, 1.0);
}

TEST(RunLoop, ClassifiesWithLoweredProgram) {
  std::mt19937_64 rng(4);
  const LoweredProgram lowered = lower_model(default_model());
  std::vector<TimedFrame> frames;
  for (int i = 0; i < 4; ++i) frames.push_back({i * 2000, testing::random_bits(rng, 64, 64)});
  frames.push_back({9000, frames[0].image});
  const ServoTimeline tl =
      run_loop(frames, lowered, CostModel::default_table(), kOne, 20000);
  EXPECT_EQ(tl.inference_latency_us, 121);
  const auto done = of_kind(tl, EventKind::inference_done);
  ASSERT_EQ(done.size(), frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    EXPECT_EQ(done[i].class_index, reference_infer(default_model(), frames[i].image).predicted);
  }
  EXPECT_EQ(tl, run_loop(frames, lowered, CostModel::default_table(), kOne, 20000));
  frames.push_back({19000, BitImage(32, 32)});
  EXPECT_THROW(run_loop(frames, lowered, CostModel::default_table(), kOne, 20000), Error);
}

TEST(Summary, Text) {
  const std::vector<ClassifiedFrame> frames{{0, 1}, {100, 1}};
  const LoopSummary s = summarize(simulate_loop(frames, kLatency, kOne, 10000));
  EXPECT_EQ(s.to_text(),
            "frames=2 latched=1 dropped=1 pending=0 reaction_us_min=2903 reaction_us_max=2903 "
            "reaction_us_mean=2903.0");
}

}  // namespace
}  // namespace scampsim
