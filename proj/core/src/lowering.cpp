// SPDX-License-Identifier: Apache-2.0
#include "scampsim/lowering.hpp"

#include <algorithm>

#include "scampsim/error.hpp"
#include "scampsim/executor.hpp"

namespace scampsim {

RegisterAssignment assign_registers(const RegisterFileConfig& registers) {
  const auto& analog = registers.analog;
  const auto& digital = registers.digital;
  if (analog.size() < kLoweringAnalogRegisters || digital.size() < kLoweringDigitalRegisters) {
    throw Error(ErrorKind::lowering,
                "register budget exceeded: lowering needs " +
                    std::to_string(kLoweringAnalogRegisters) + " analog and " +
                    std::to_string(kLoweringDigitalRegisters) + " digital registers, bank has " +
                    std::to_string(analog.size()) + " analog and " +
                    std::to_string(digital.size()) + " digital");
  }
  std::vector<std::string> pool = analog;
  RegisterAssignment regs;
  auto pix = std::find(pool.begin(), pool.end(), "PIX");
  if (pix != pool.end()) {
    regs.input = *pix;
    pool.erase(pix);
  } else {
    regs.input = pool.front();
    pool.erase(pool.begin());
  }
  regs.replicated = pool[0];
  regs.row_shift = pool[1];
  regs.tap_shift = pool[2];
  regs.accumulator = pool[3];
  regs.scratch = pool[4];
  regs.mask_pos = digital[0];
  regs.mask_neg = digital[1];
  regs.mask_aux = digital[2];
  return regs;
}

const StageSpan& LoweringPlan::stage(const std::string& name) const {
  for (const auto& s : stages) {
    if (s.name == name) return s;
  }
  throw Error(ErrorKind::lowering, "no stage named '" + name + "'");
}

std::map<Opcode, std::size_t> LoweringPlan::stage_counts(const PpaProgram& program,
                                                         const std::string& name) const {
  const auto& s = stage(name);
  std::map<Opcode, std::size_t> counts;
  for (std::size_t i = s.begin; i < s.end; ++i) ++counts[program.instructions[i].op];
  return counts;
}

nlohmann::json LoweringPlan::to_json(const PpaProgram& program) const {
  nlohmann::json doc;
  doc["registers"] = {
      {"input", registers.input},         {"replicated", registers.replicated},
      {"row_shift", registers.row_shift}, {"tap_shift", registers.tap_shift},
      {"accumulator", registers.accumulator}, {"scratch", registers.scratch},
      {"mask_pos", registers.mask_pos},   {"mask_neg", registers.mask_neg},
      {"mask_aux", registers.mask_aux},
  };
  nlohmann::json stages_doc = nlohmann::json::array();
  for (const auto& s : stages) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [op, n] : stage_counts(program, s.name)) counts[std::string(to_string(op))] = n;
    stages_doc.push_back({{"name", s.name}, {"begin", s.begin}, {"end", s.end}, {"counts", counts}});
  }
  doc["stages"] = std::move(stages_doc);
  doc["conv_taps"] = {{"taps", taps},
                      {"with_positive", taps_with_positive},
                      {"with_negative", taps_with_negative}};
  doc["instruction_total"] = program.instructions.size();
  doc["pattern_count"] = program.patterns.size();
  return doc;
}

ProgramBuilder::ProgramBuilder(PlaneGeometry geometry) { program_.geometry = geometry; }

void ProgramBuilder::load_pattern(const std::string& dst, const std::string& name,
                                  BitImage pattern) {
  if (!program_.patterns.emplace(name, std::move(pattern)).second) {
    throw Error(ErrorKind::lowering, "pattern '" + name + "' emitted twice");
  }
  emit(Instruction::write_pattern(dst, name));
}

// ---------------------------------------------------------------------------
// Mask patterns

BitImage block_mask(const PlaneGeometry& g, const std::vector<bool>& blocks) {
  BitImage img(g.height, g.width);
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      img.at(r, c) = blocks[static_cast<std::size_t>(g.block_index(r, c))] ? 1 : 0;
    }
  }
  return img;
}

BitImage border_mask(const PlaneGeometry& g, int k) {
  BitImage img(g.height, g.width);
  const int limit = g.block_size - k;  // last block-local index with a full window
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) {
      img.at(r, c) = (r % g.block_size > limit || c % g.block_size > limit) ? 1 : 0;
    }
  }
  return img;
}

BitImage even_columns_mask(const PlaneGeometry& g) {
  BitImage img(g.height, g.width);
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) img.at(r, c) = (c % 2 == 0) ? 1 : 0;
  }
  return img;
}

BitImage even_rows_mask(const PlaneGeometry& g) {
  BitImage img(g.height, g.width);
  for (int r = 0; r < g.height; ++r) {
    for (int c = 0; c < g.width; ++c) img.at(r, c) = (r % 2 == 0) ? 1 : 0;
  }
  return img;
}

BitImage replicate_cells(const BitImage& pattern, int factor) {
  BitImage img(pattern.height * factor, pattern.width * factor);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) img.at(r, c) = pattern.at(r / factor, c / factor);
  }
  return img;
}

BitImage fc_negative_mask(const BnnModel& model, int cls) {
  const auto& g = model.geometry;
  const int ps = model.pooled_side();
  // Pooled-resolution sign map laid out as the plane's block grid.
  BitImage half(g.height / 2, g.width / 2);
  for (int b = 0; b < model.num_blocks(); ++b) {
    const int br = b / g.block_grid;
    const int bc = b % g.block_grid;
    for (int i = 0; i < ps; ++i) {
      for (int j = 0; j < ps; ++j) {
        half.at(br * ps + i, bc * ps + j) = model.fc_weight(cls, b, i, j) < 0 ? 1 : 0;
      }
    }
  }
  return replicate_cells(half, 2);
}

// ---------------------------------------------------------------------------
// Stages

void lower_replicate(ProgramBuilder& out, const RegisterAssignment& regs) {
  const auto& g = out.geometry();
  if (g.block_grid == 1) {
    out.emit(Instruction::copy(regs.replicated, regs.input));
    return;
  }
  // Doubling: after each horizontal step the first 2m block columns hold the
  // image; copies pushed past the array edge vanish.
  std::string src = regs.input;
  for (int m = 1; m < g.block_grid; m *= 2) {
    out.emit(Instruction::shift(regs.scratch, src, Direction::east, m * g.block_size));
    out.emit(Instruction::add(regs.replicated, src, regs.scratch));
    src = regs.replicated;
  }
  for (int m = 1; m < g.block_grid; m *= 2) {
    out.emit(Instruction::shift(regs.scratch, regs.replicated, Direction::south, m * g.block_size));
    out.emit(Instruction::add(regs.replicated, regs.replicated, regs.scratch));
  }
}

void lower_conv(ProgramBuilder& out, const BnnModel& model, const RegisterAssignment& regs) {
  const auto& g = out.geometry();
  const int k = model.k;
  const int nb = model.num_blocks();
  bool first = true;
  for (int dy = 0; dy < k; ++dy) {
    for (int dx = 0; dx < k; ++dx) {
      // row_shift(r,c) = replicated(r+dy, c); tap_shift(r,c) = replicated(r+dy, c+dx).
      std::string current;
      if (dx == 0) {
        out.emit(Instruction::shift(regs.row_shift, dy == 0 ? regs.replicated : regs.row_shift,
                                    Direction::north, dy == 0 ? 0 : 1));
        current = regs.row_shift;
      } else {
        out.emit(Instruction::shift(regs.tap_shift, dx == 1 ? regs.row_shift : regs.tap_shift,
                                    Direction::west, 1));
        current = regs.tap_shift;
      }
      std::vector<bool> pos(static_cast<std::size_t>(nb));
      std::vector<bool> neg(static_cast<std::size_t>(nb));
      bool any_pos = false;
      bool any_neg = false;
      for (int b = 0; b < nb; ++b) {
        const bool p = model.kernel(b, dy, dx) > 0;
        pos[static_cast<std::size_t>(b)] = p;
        neg[static_cast<std::size_t>(b)] = !p;
        any_pos = any_pos || p;
        any_neg = any_neg || !p;
      }
      const std::string tap = std::to_string(dy) + "_" + std::to_string(dx);
      if (any_pos) {
        out.load_pattern(regs.mask_pos, "tap_" + tap + "_pos", block_mask(g, pos));
        out.emit(first ? Instruction::copy(regs.accumulator, current, regs.mask_pos)
                       : Instruction::add(regs.accumulator, regs.accumulator, current,
                                          regs.mask_pos));
      }
      if (any_neg) {
        out.load_pattern(regs.mask_neg, "tap_" + tap + "_neg", block_mask(g, neg));
        out.emit(first ? Instruction::neg(regs.accumulator, current, regs.mask_neg)
                       : Instruction::sub(regs.accumulator, regs.accumulator, current,
                                          regs.mask_neg));
      }
      first = false;
    }
  }
  out.load_pattern(regs.mask_aux, "border", border_mask(g, k));
  out.emit(Instruction::sub(regs.accumulator, regs.accumulator, regs.accumulator, regs.mask_aux));
}

void lower_relu(ProgramBuilder& out, const RegisterAssignment& regs) {
  out.emit(Instruction::threshold(regs.mask_pos, regs.accumulator, -1));
  out.emit(Instruction::logic(Opcode::d_not, regs.mask_neg, regs.mask_pos));
  out.emit(Instruction::sub(regs.accumulator, regs.accumulator, regs.accumulator, regs.mask_neg));
}

void lower_maxpool(ProgramBuilder& out, const RegisterAssignment& regs) {
  const auto& g = out.geometry();
  const auto& acc = regs.accumulator;
  const auto& tmp = regs.scratch;
  // Even columns take their east neighbour, then odd columns copy back the
  // pair maximum from the west; same again along rows.
  out.load_pattern(regs.mask_aux, "even_cols", even_columns_mask(g));
  out.emit(Instruction::logic(Opcode::d_not, regs.mask_neg, regs.mask_aux));
  out.emit(Instruction::shift(tmp, acc, Direction::west, 1));
  out.emit(Instruction::max(acc, acc, tmp, regs.mask_aux));
  out.emit(Instruction::shift(tmp, acc, Direction::east, 1));
  out.emit(Instruction::max(acc, acc, tmp, regs.mask_neg));
  out.load_pattern(regs.mask_aux, "even_rows", even_rows_mask(g));
  out.emit(Instruction::logic(Opcode::d_not, regs.mask_neg, regs.mask_aux));
  out.emit(Instruction::shift(tmp, acc, Direction::north, 1));
  out.emit(Instruction::max(acc, acc, tmp, regs.mask_aux));
  out.emit(Instruction::shift(tmp, acc, Direction::south, 1));
  out.emit(Instruction::max(acc, acc, tmp, regs.mask_neg));
}

void lower_fc(ProgramBuilder& out, const BnnModel& model, const RegisterAssignment& regs) {
  const auto& work = regs.row_shift;
  for (int c = 0; c < model.num_classes(); ++c) {
    const auto& label = model.class_names[static_cast<std::size_t>(c)];
    out.add_label(label);
    out.emit(Instruction::copy(work, regs.accumulator));
    out.load_pattern(regs.mask_aux, "fc_neg_" + std::to_string(c), fc_negative_mask(model, c));
    out.emit(Instruction::neg(work, work, regs.mask_aux));
    out.emit(Instruction::global_sum(work, label));
  }
}

LoweredProgram lower_model(const BnnModel& model, const RegisterFileConfig& registers) {
  model.validate();
  for (const auto& name : model.class_names) {
    const bool bad = name.empty() || name[0] == '@' || name[0] == '.' ||
                     name.find_first_of(" \t\r\n#") != std::string::npos;
    if (bad) throw Error(ErrorKind::lowering, "class name '" + name + "' is not a listing token");
  }
  LoweredProgram result;
  result.plan.registers = assign_registers(registers);
  const auto& regs = result.plan.registers;
  ProgramBuilder out(model.geometry);

  auto run_stage = [&](const std::string& name, auto&& fn) {
    const std::size_t begin = out.size();
    try {
      fn();
    } catch (const Error& e) {
      throw Error(e.kind(), "stage " + name + ": " + e.what());
    }
    result.plan.stages.push_back({name, begin, out.size()});
  };
  run_stage("replicate", [&] { lower_replicate(out, regs); });
  run_stage("conv", [&] { lower_conv(out, model, regs); });
  run_stage("relu", [&] { lower_relu(out, regs); });
  run_stage("maxpool", [&] { lower_maxpool(out, regs); });
  run_stage("fc", [&] { lower_fc(out, model, regs); });

  result.plan.taps = model.k * model.k;
  for (int dy = 0; dy < model.k; ++dy) {
    for (int dx = 0; dx < model.k; ++dx) {
      bool any_pos = false;
      bool any_neg = false;
      for (int b = 0; b < model.num_blocks(); ++b) {
        (model.kernel(b, dy, dx) > 0 ? any_pos : any_neg) = true;
      }
      result.plan.taps_with_positive += any_pos ? 1 : 0;
      result.plan.taps_with_negative += any_neg ? 1 : 0;
    }
  }
  result.program = out.take();
  return result;
}

// ---------------------------------------------------------------------------
// Host-side preparation

BitImage binarize(const GrayImage& img, std::uint8_t t) {
  BitImage out(img.height, img.width);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) out.bits[i] = img.pixels[i] > t ? 1 : 0;
  return out;
}

BitImage majority_downsample(const BitImage& img, int side) {
  if (img.height <= 0 || img.width <= 0) throw Error(ErrorKind::geometry, "empty image");
  BitImage out(side, side);
  auto span = [side](int n, int i) {
    const int lo = static_cast<int>(static_cast<long long>(i) * n / side);
    const int hi = static_cast<int>(static_cast<long long>(i + 1) * n / side);
    return std::pair{lo, std::max(hi, lo + 1)};
  };
  for (int i = 0; i < side; ++i) {
    const auto [r0, r1] = span(img.height, i);
    for (int j = 0; j < side; ++j) {
      const auto [c0, c1] = span(img.width, j);
      int ones = 0;
      for (int r = r0; r < r1; ++r) {
        for (int c = c0; c < c1; ++c) ones += img.at(r, c);
      }
      out.at(i, j) = 2 * ones > (r1 - r0) * (c1 - c0) ? 1 : 0;
    }
  }
  return out;
}

BitImage host_prep(const GrayImage& capture, int side, std::uint8_t t) {
  return majority_downsample(binarize(capture, t), side);
}

GrayImage host_frame(const BitImage& input, const PlaneGeometry& geometry) {
  if (input.height != geometry.block_size || input.width != geometry.block_size) {
    throw Error(ErrorKind::geometry, "input must be " + std::to_string(geometry.block_size) + "x" +
                                         std::to_string(geometry.block_size));
  }
  if (!input.is_binary()) throw Error(ErrorKind::format, "input is not binary");
  GrayImage frame(geometry.height, geometry.width);
  for (int r = 0; r < input.height; ++r) {
    for (int c = 0; c < input.width; ++c) frame.at(r, c) = input.at(r, c);
  }
  return frame;
}

std::vector<std::int64_t> run_lowered(const LoweredProgram& lowered, const BitImage& input,
                                      const ArrayConfig& config) {
  ArrayState state(config);
  state.load_image(host_frame(input, state.geometry()), lowered.plan.registers.input);
  return execute(lowered.program, state);
}

}  // namespace scampsim
