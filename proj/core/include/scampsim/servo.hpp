// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scampsim/array_state.hpp"
#include "scampsim/cost_model.hpp"
#include "scampsim/image.hpp"
#include "scampsim/lowering.hpp"

namespace scampsim {

/// Hobby-servo PWM model: pulse width maps affinely from min_pulse_us at 0
/// degrees to max_pulse_us at max_angle_deg, one pulse per PWM period.
struct ServoModel {
  std::int64_t pwm_period_us = 3003;  // 333 Hz
  double min_pulse_us = 1000.0;
  double max_pulse_us = 2000.0;
  double max_angle_deg = 180.0;
  double slew_deg_per_s = 600.0;
  double angle_deg = 0.0;
  /// Commanded angle per class index.
  std::vector<double> class_angles{0.0, 90.0, 180.0};

  double pulse_width_us(double angle) const;
  double angle_for_pulse(double pulse_us) const;
  /// Largest angle change between two consecutive PWM edges.
  double max_step_deg() const {
    return slew_deg_per_s * static_cast<double>(pwm_period_us) / 1e6;
  }
  /// Target angle for a class after pulse-width clamping.
  double target_for_class(int cls) const;
};

class ServoBank {
 public:
  static constexpr std::size_t kMaxServos = 5;

  /// Throws Error(servo) for an empty bank, more than kMaxServos servos, or
  /// servos that disagree on the PWM period.
  explicit ServoBank(std::vector<ServoModel> servos);

  const std::vector<ServoModel>& servos() const { return servos_; }
  std::int64_t pwm_period_us() const { return servos_.front().pwm_period_us; }

 private:
  std::vector<ServoModel> servos_;
};

enum class EventKind { frame, inference_done, pwm_edge, angle_update };
std::string_view to_string(EventKind kind);

struct TimelineEvent {
  std::int64_t t_us = 0;
  EventKind kind = EventKind::frame;
  int servo_id = -1;     // angle_update only
  int frame_index = -1;  // frame, inference_done, and the angle_update that latches a frame
  int class_index = -1;
  std::optional<double> angle;

  bool operator==(const TimelineEvent&) const = default;
};

struct ServoTimeline {
  std::vector<TimelineEvent> events;
  std::int64_t inference_latency_us = 0;
  std::int64_t pwm_period_us = 0;
  std::int64_t duration_us = 0;

  /// t_us,event,servo_id,class,angle (empty fields where not applicable).
  std::string to_csv() const;
  bool operator==(const ServoTimeline&) const = default;
};

struct ClassifiedFrame {
  std::int64_t t_us = 0;
  int class_index = 0;
};

struct TimedFrame {
  std::int64_t t_us = 0;
  BitImage image;
};

/// Discrete-event core: a frame's result latches at the first PWM edge
/// strictly after its inference completes, the last result to complete
/// before an edge wins, and servos slew toward the latched target at every
/// edge. Edges fall at multiples of the PWM period in [0, duration_us].
ServoTimeline simulate_loop(std::span<const ClassifiedFrame> frames,
                            std::int64_t inference_latency_us, const ServoBank& bank,
                            std::int64_t duration_us);

/// Classifies each frame by executing the lowered program (results are
/// memoized per distinct image; the array runs noise-free), takes the
/// inference latency from the cost model rounded up to whole microseconds,
/// and runs simulate_loop.
ServoTimeline run_loop(std::span<const TimedFrame> frames, const LoweredProgram& lowered,
                       const CostModel& cost, const ServoBank& bank, std::int64_t duration_us,
                       const ArrayConfig& config = {});

enum class FrameFate { latched, dropped, pending };

struct FrameReaction {
  int frame_index = 0;
  std::int64_t frame_t_us = 0;
  FrameFate fate = FrameFate::pending;
  std::optional<std::int64_t> reaction_us;
};

/// Per frame: time to the first angle_update reflecting it. Frames whose
/// result was overwritten before latching are `dropped`; frames whose latch
/// edge falls after the simulated duration are `pending`.
std::vector<FrameReaction> reaction_latency(const ServoTimeline& timeline);

struct LoopSummary {
  std::size_t frames = 0;
  std::size_t latched = 0;
  std::size_t dropped = 0;
  std::size_t pending = 0;
  std::int64_t min_reaction_us = 0;
  std::int64_t max_reaction_us = 0;
  double mean_reaction_us = 0.0;
  std::string to_text() const;
};

LoopSummary summarize(const ServoTimeline& timeline);

}  // namespace scampsim
