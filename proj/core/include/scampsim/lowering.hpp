// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "scampsim/array_state.hpp"
#include "scampsim/bnn_model.hpp"
#include "scampsim/image.hpp"
#include "scampsim/program.hpp"

namespace scampsim {

/// Which bank registers the lowered program uses for each role.
struct RegisterAssignment {
  std::string input;        // host-loaded frame (PIX)
  std::string replicated;   // input tiled into every block
  std::string row_shift;    // input shifted north by the current tap row; FC scratch later
  std::string tap_shift;    // row_shift shifted west by the current tap column
  std::string accumulator;  // conv -> relu -> pool
  std::string scratch;      // replicate / pool neighbour transfers
  std::string mask_pos;
  std::string mask_neg;
  std::string mask_aux;
};

inline constexpr int kLoweringAnalogRegisters = 6;
inline constexpr int kLoweringDigitalRegisters = 3;

/// Picks registers from the bank ("PIX" is preferred for the input). Throws
/// Error(lowering) with a budget report when the bank is too small.
RegisterAssignment assign_registers(const RegisterFileConfig& registers);

struct StageSpan {
  std::string name;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct LoweringPlan {
  RegisterAssignment registers;
  std::vector<StageSpan> stages;
  int taps = 0;
  int taps_with_positive = 0;
  int taps_with_negative = 0;

  const StageSpan& stage(const std::string& name) const;
  std::map<Opcode, std::size_t> stage_counts(const PpaProgram& program,
                                             const std::string& name) const;
  nlohmann::json to_json(const PpaProgram& program) const;
};

struct LoweredProgram {
  PpaProgram program;
  LoweringPlan plan;
};

/// Appends instructions and patterns to a program under construction.
class ProgramBuilder {
 public:
  explicit ProgramBuilder(PlaneGeometry geometry);

  void emit(Instruction ins) { program_.instructions.push_back(std::move(ins)); }
  /// Registers a pattern (name must be new) and emits write_pattern into dst.
  void load_pattern(const std::string& dst, const std::string& name, BitImage pattern);
  void add_label(std::string label) { program_.labels.push_back(std::move(label)); }

  std::size_t size() const { return program_.instructions.size(); }
  const PlaneGeometry& geometry() const { return program_.geometry; }
  PpaProgram take() { return std::move(program_); }
  const PpaProgram& program() const { return program_; }

 private:
  PpaProgram program_;
};

// Stage emitters. Each assumes the previous stage's output is in place.

/// input (block 0 only) -> replicated (every block) by doubling shifts.
void lower_replicate(ProgramBuilder& out, const RegisterAssignment& regs);
/// replicated -> accumulator: per-block convolution with valid-interior
/// zeroing. Each tap is one shift plus masked copy/add under its +1 block
/// mask and masked neg/sub under its -1 block mask.
void lower_conv(ProgramBuilder& out, const BnnModel& model, const RegisterAssignment& regs);
void lower_relu(ProgramBuilder& out, const RegisterAssignment& regs);
/// 2x2 max, replicated into all four pixels of each aligned cell.
void lower_maxpool(ProgramBuilder& out, const RegisterAssignment& regs);
/// One masked negate and global_sum per class; declares the class labels.
void lower_fc(ProgramBuilder& out, const BnnModel& model, const RegisterAssignment& regs);

LoweredProgram lower_model(const BnnModel& model, const RegisterFileConfig& registers = {});

// Mask patterns used by the lowering.

BitImage block_mask(const PlaneGeometry& g, const std::vector<bool>& blocks);
/// Bits set where a k x k window anchored at the pixel leaves its block.
BitImage border_mask(const PlaneGeometry& g, int k);
BitImage even_columns_mask(const PlaneGeometry& g);
BitImage even_rows_mask(const PlaneGeometry& g);
/// Bits set on every pixel whose pooled feature has FC weight -1 for `cls`.
BitImage fc_negative_mask(const BnnModel& model, int cls);
/// Expands a pattern by repeating every bit into a factor x factor cell.
BitImage replicate_cells(const BitImage& pattern, int factor);

// Host-side preparation.

/// Bit = 1 where pixel > t.
BitImage binarize(const GrayImage& img, std::uint8_t t = 127);
/// Strict-majority vote over the source rectangle of each output pixel.
BitImage majority_downsample(const BitImage& img, int side);
/// binarize then majority_downsample to side x side.
BitImage host_prep(const GrayImage& capture, int side = 64, std::uint8_t t = 127);
/// Full-plane frame holding `input` (0/1 values) in block 0, zero elsewhere;
/// this is what the lowered program expects in its input register.
GrayImage host_frame(const BitImage& input, const PlaneGeometry& geometry);

/// Runs a lowered program on one binary input in a fresh array and returns
/// the class sums.
std::vector<std::int64_t> run_lowered(const LoweredProgram& lowered, const BitImage& input,
                                      const ArrayConfig& config);

}  // namespace scampsim
