// SPDX-License-Identifier: Apache-2.0
#include "scampsim/servo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "scampsim/bnn_model.hpp"
#include "scampsim/error.hpp"
#include "scampsim/executor.hpp"

namespace scampsim {
namespace {

int kind_rank(EventKind k) { return static_cast<int>(k); }

}  // namespace

double ServoModel::pulse_width_us(double angle) const {
  const double pulse = min_pulse_us + angle / max_angle_deg * (max_pulse_us - min_pulse_us);
  return std::clamp(pulse, min_pulse_us, max_pulse_us);
}

double ServoModel::angle_for_pulse(double pulse_us) const {
  return (pulse_us - min_pulse_us) / (max_pulse_us - min_pulse_us) * max_angle_deg;
}

double ServoModel::target_for_class(int cls) const {
  if (cls < 0 || cls >= static_cast<int>(class_angles.size())) {
    throw Error(ErrorKind::servo, "no angle configured for class " + std::to_string(cls));
  }
  return angle_for_pulse(pulse_width_us(class_angles[static_cast<std::size_t>(cls)]));
}

ServoBank::ServoBank(std::vector<ServoModel> servos) : servos_(std::move(servos)) {
  if (servos_.empty()) throw Error(ErrorKind::servo, "servo bank needs at least one servo");
  if (servos_.size() > kMaxServos) {
    throw Error(ErrorKind::servo, "servo bank supports at most " + std::to_string(kMaxServos) +
                                      " servos, got " + std::to_string(servos_.size()));
  }
  for (const auto& s : servos_) {
    if (s.pwm_period_us <= 0 || s.pwm_period_us != servos_.front().pwm_period_us) {
      throw Error(ErrorKind::servo, "servos must share one positive PWM period");
    }
    if (!(s.max_pulse_us > s.min_pulse_us) || !(s.max_angle_deg > 0) || s.slew_deg_per_s < 0) {
      throw Error(ErrorKind::servo, "invalid servo pulse range or slew limit");
    }
  }
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::frame: return "frame";
    case EventKind::inference_done: return "inference_done";
    case EventKind::pwm_edge: return "pwm_edge";
    case EventKind::angle_update: return "angle_update";
  }
  return "?";
}

std::string ServoTimeline::to_csv() const {
  std::ostringstream os;
  os << "t_us,event,servo_id,class,angle\n";
  char buf[64];
  for (const auto& e : events) {
    os << e.t_us << ',' << to_string(e.kind) << ',';
    if (e.servo_id >= 0) os << e.servo_id;
    os << ',';
    if (e.class_index >= 0) os << e.class_index;
    os << ',';
    if (e.angle) {
      std::snprintf(buf, sizeof(buf), "%.4f", *e.angle);
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

ServoTimeline simulate_loop(std::span<const ClassifiedFrame> frames,
                            std::int64_t inference_latency_us, const ServoBank& bank,
                            std::int64_t duration_us) {
  if (inference_latency_us < 0 || duration_us < 0) {
    throw Error(ErrorKind::servo, "latency and duration must be >= 0");
  }
  const std::int64_t period = bank.pwm_period_us();
  ServoTimeline tl;
  tl.inference_latency_us = inference_latency_us;
  tl.pwm_period_us = period;
  tl.duration_us = duration_us;

  // Latch edge -> winning frame (last writer).
  std::map<std::int64_t, int> latch;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    if (f.t_us < 0 || (i > 0 && f.t_us < frames[i - 1].t_us)) {
      throw Error(ErrorKind::servo, "frame timestamps must be nonnegative and nondecreasing");
    }
    if (f.t_us > duration_us) throw Error(ErrorKind::servo, "frame after end of simulation");
    const std::int64_t done = f.t_us + inference_latency_us;
    tl.events.push_back({f.t_us, EventKind::frame, -1, static_cast<int>(i), -1, std::nullopt});
    if (done <= duration_us) {
      tl.events.push_back(
          {done, EventKind::inference_done, -1, static_cast<int>(i), f.class_index, std::nullopt});
    }
    const std::int64_t edge = (done / period + 1) * period;
    latch[edge] = static_cast<int>(i);
  }

  std::vector<ServoModel> servos = bank.servos();
  std::vector<double> target(servos.size());
  std::vector<int> target_class(servos.size(), -1);
  for (std::size_t s = 0; s < servos.size(); ++s) target[s] = servos[s].angle_deg;

  for (std::int64_t t = 0; t <= duration_us; t += period) {
    tl.events.push_back({t, EventKind::pwm_edge, -1, -1, -1, std::nullopt});
    int frame = -1;
    if (auto it = latch.find(t); it != latch.end()) frame = it->second;
    for (std::size_t s = 0; s < servos.size(); ++s) {
      auto& servo = servos[s];
      if (frame >= 0) {
        target_class[s] = frames[static_cast<std::size_t>(frame)].class_index;
        target[s] = servo.target_for_class(target_class[s]);
      }
      const double before = servo.angle_deg;
      const double step = servo.max_step_deg();
      const double delta = std::clamp(target[s] - before, -step, step);
      servo.angle_deg = std::abs(target[s] - before) <= step ? target[s] : before + delta;
      if (frame >= 0 || servo.angle_deg != before) {
        tl.events.push_back({t, EventKind::angle_update, static_cast<int>(s), frame,
                             target_class[s], servo.angle_deg});
      }
    }
  }

  std::stable_sort(tl.events.begin(), tl.events.end(),
                   [](const TimelineEvent& a, const TimelineEvent& b) {
                     if (a.t_us != b.t_us) return a.t_us < b.t_us;
                     return kind_rank(a.kind) < kind_rank(b.kind);
                   });
  return tl;
}

ServoTimeline run_loop(std::span<const TimedFrame> frames, const LoweredProgram& lowered,
                       const CostModel& cost, const ServoBank& bank, std::int64_t duration_us,
                       const ArrayConfig& config) {
  const TimingReport timing = estimate(lowered.program, cost);
  const auto latency = static_cast<std::int64_t>(std::ceil(timing.latency_us));
  ArrayConfig cfg = config;
  cfg.geometry = lowered.program.geometry;
  cfg.noise = NoiseModel{};

  std::map<std::vector<std::uint8_t>, int> cache;
  std::vector<ClassifiedFrame> classified;
  classified.reserve(frames.size());
  for (const auto& f : frames) {
    const int bs = cfg.geometry.block_size;
    if (f.image.height != bs || f.image.width != bs) {
      throw Error(ErrorKind::geometry, "frame must be " + std::to_string(bs) + "x" +
                                           std::to_string(bs));
    }
    auto it = cache.find(f.image.bits);
    if (it == cache.end()) {
      const auto sums = run_lowered(lowered, f.image, cfg);
      it = cache.emplace(f.image.bits, argmax(sums)).first;
    }
    classified.push_back({f.t_us, it->second});
  }
  return simulate_loop(classified, latency, bank, duration_us);
}

std::vector<FrameReaction> reaction_latency(const ServoTimeline& timeline) {
  std::vector<FrameReaction> out;
  std::map<int, std::size_t> slot;
  for (const auto& e : timeline.events) {
    if (e.kind == EventKind::frame) {
      slot[e.frame_index] = out.size();
      out.push_back({e.frame_index, e.t_us, FrameFate::pending, std::nullopt});
    }
  }
  for (const auto& e : timeline.events) {
    if (e.kind != EventKind::angle_update || e.frame_index < 0) continue;
    auto& r = out[slot.at(e.frame_index)];
    if (!r.reaction_us) {
      r.reaction_us = e.t_us - r.frame_t_us;
      r.fate = FrameFate::latched;
    }
  }
  const std::int64_t period = timeline.pwm_period_us;
  for (auto& r : out) {
    if (r.fate == FrameFate::latched) continue;
    const std::int64_t done = r.frame_t_us + timeline.inference_latency_us;
    const std::int64_t edge = (done / period + 1) * period;
    r.fate = edge <= timeline.duration_us ? FrameFate::dropped : FrameFate::pending;
  }
  return out;
}

LoopSummary summarize(const ServoTimeline& timeline) {
  LoopSummary s;
  double total = 0.0;
  for (const auto& r : reaction_latency(timeline)) {
    ++s.frames;
    switch (r.fate) {
      case FrameFate::latched: {
        const auto v = *r.reaction_us;
        s.min_reaction_us = s.latched == 0 ? v : std::min(s.min_reaction_us, v);
        s.max_reaction_us = s.latched == 0 ? v : std::max(s.max_reaction_us, v);
        total += static_cast<double>(v);
        ++s.latched;
        break;
      }
      case FrameFate::dropped: ++s.dropped; break;
      case FrameFate::pending: ++s.pending; break;
    }
  }
  s.mean_reaction_us = s.latched ? total / static_cast<double>(s.latched) : 0.0;
  return s;
}

std::string LoopSummary::to_text() const {
  std::ostringstream os;
  os << "frames=" << frames << " latched=" << latched << " dropped=" << dropped
     << " pending=" << pending;
  if (latched) {
    os << " reaction_us_min=" << min_reaction_us << " reaction_us_max=" << max_reaction_us
       << " reaction_us_mean=" << format_us(mean_reaction_us);
  }
  return os.str();
}

}  // namespace scampsim
