// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "output_dir.hpp"
#include "scampsim/bnn_model.hpp"
#include "scampsim/cost_model.hpp"
#include "scampsim/error.hpp"
#include "scampsim/executor.hpp"
#include "scampsim/gesture_data.hpp"
#include "scampsim/lowering.hpp"
#include "scampsim/pnm.hpp"
#include "scampsim/servo.hpp"
#include "scampsim/trainer.hpp"

namespace scampsim::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunConfig {
  std::string weights;
  std::string dataset;
  std::string cost_table;
  std::string out;
  std::string config;
  std::uint64_t seed = 7;
  double noise_sigma = 0.0;
  std::string mode = "ideal";
};

/// Options shared by several subcommands. Keeps the option handles so values
/// from a --config file only fill in flags that were not given.
class CommonOptions {
 public:
  explicit CommonOptions(RunConfig& cfg) : cfg_(cfg) {}

  void weights(CLI::App* app) {
    opts_[{app, "weights"}] = app->add_option("--weights", cfg_.weights,
                                       "Weights JSON (default: built-in random model, seed 0)");
  }
  void dataset(CLI::App* app, const std::string& help) {
    opts_[{app, "dataset"}] = app->add_option("--dataset", cfg_.dataset, help);
  }
  void cost_table(CLI::App* app) {
    opts_[{app, "cost_table"}] = app->add_option("--cost-table", cfg_.cost_table,
                                          "Cost table JSON (default: shipped calibrated table)");
  }
  void out(CLI::App* app, const std::string& help) {
    opts_[{app, "out"}] = app->add_option("--out", cfg_.out, help);
  }
  void seed(CLI::App* app, const std::string& help) {
    opts_[{app, "seed"}] = app->add_option("--seed", cfg_.seed, help)->capture_default_str();
  }
  void array(CLI::App* app) {
    opts_[{app, "mode"}] = app->add_option("--mode", cfg_.mode, "Analog register model")
                        ->check(CLI::IsMember({"ideal", "saturating"}))
                        ->capture_default_str();
    opts_[{app, "noise_sigma"}] =
        app->add_option("--noise-sigma", cfg_.noise_sigma,
                        "Gaussian global-sum noise sigma in analog units (seeded by --seed)")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
  }
  void config(CLI::App* app) {
    app->add_option("--config", cfg_.config,
                    "JSON file with any of: weights, dataset, cost_table, out, seed, "
                    "noise_sigma, mode; explicit flags take precedence");
  }

  /// Fills unset options from the --config file.
  void apply_config_file(const CLI::App* active) {
    active_ = active;
    if (cfg_.config.empty()) return;
    require_file(cfg_.config, "--config");
    json doc = read_json(cfg_.config);
    if (!doc.is_object()) throw Error(ErrorKind::config, cfg_.config + ": expected a JSON object");
    for (const auto& [key, value] : doc.items()) {
      auto it = opts_.find({active_, key});
      if (it == opts_.end()) {
        throw Error(ErrorKind::config, cfg_.config + ": key '" + key + "' does not apply here");
      }
      if (it->second->count() > 0) continue;
      from_config_.push_back(key);
      try {
        if (key == "seed") {
          cfg_.seed = value.get<std::uint64_t>();
        } else if (key == "noise_sigma") {
          cfg_.noise_sigma = value.get<double>();
          if (cfg_.noise_sigma < 0) throw Error(ErrorKind::config, "noise_sigma is negative");
        } else if (key == "mode") {
          cfg_.mode = value.get<std::string>();
          if (cfg_.mode != "ideal" && cfg_.mode != "saturating") {
            throw Error(ErrorKind::config, "mode must be ideal or saturating");
          }
        } else {
          string_field(key) = value.get<std::string>();
        }
      } catch (const json::exception& e) {
        throw Error(ErrorKind::config, cfg_.config + ": key '" + key + "': " + e.what());
      }
    }
  }

  /// True when the option was set by a flag or by the --config file.
  bool given(const std::string& key) const {
    auto it = opts_.find({active_, key});
    if (it != opts_.end() && it->second->count() > 0) return true;
    return std::find(from_config_.begin(), from_config_.end(), key) != from_config_.end();
  }

  static json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path);
    try {
      return json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::config, path + ": " + e.what());
    }
  }

  static void require_file(const std::string& path, const std::string& flag) {
    if (!fs::is_regular_file(path)) throw Error(ErrorKind::io, flag + " " + path + ": no such file");
  }
  static void require_dir(const std::string& path, const std::string& flag) {
    if (!fs::is_directory(path)) throw Error(ErrorKind::io, flag + " " + path + ": no such directory");
  }
  static void require_out(const std::string& path) {
    if (path.empty()) throw Error(ErrorKind::config, "--out is required");
    if (fs::exists(path) && !fs::is_directory(path)) {
      throw Error(ErrorKind::io, "--out " + path + ": exists and is not a directory");
    }
  }

 private:
  std::string& string_field(const std::string& key) {
    if (key == "weights") return cfg_.weights;
    if (key == "dataset") return cfg_.dataset;
    if (key == "cost_table") return cfg_.cost_table;
    return cfg_.out;
  }

  RunConfig& cfg_;
  std::map<std::pair<const CLI::App*, std::string>, CLI::Option*> opts_;
  const CLI::App* active_ = nullptr;
  std::vector<std::string> from_config_;
};

BnnModel load_model(const RunConfig& cfg) {
  if (cfg.weights.empty()) {
    spdlog::info("no --weights given; using the built-in random model");
    return default_model();
  }
  return load_weights_file(cfg.weights);
}

CostModel load_cost(const RunConfig& cfg) {
  return cfg.cost_table.empty() ? CostModel::default_table() : CostModel::load(cfg.cost_table);
}

ArrayConfig array_config(const RunConfig& cfg) {
  ArrayConfig ac;
  ac.mode = cfg.mode == "saturating" ? AnalogMode::saturating : AnalogMode::ideal;
  if (cfg.noise_sigma > 0) ac.noise = {NoiseKind::gaussian, cfg.noise_sigma, cfg.seed};
  return ac;
}

/// A dataset directory is either our own export (manifest.json) or a tree of
/// class subdirectories.
DatasetSplit open_dataset(const std::string& dir) {
  if (fs::is_regular_file(fs::path(dir) / "manifest.json")) return load_dataset(dir);
  return ingest(dir);
}

std::string join_sums(const std::vector<std::int64_t>& sums) {
  std::string s;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(sums[i]);
  }
  return s;
}

BitImage random_input(std::mt19937_64& rng, int side) {
  BitImage img(side, side);
  std::bernoulli_distribution bit(0.5);
  for (auto& b : img.bits) b = bit(rng) ? 1 : 0;
  return img;
}

// ---------------------------------------------------------------------------

int cmd_gen(const RunConfig& cfg, int train_per_class, int test_per_class, bool no_jitter,
            std::ostream& out) {
  CommonOptions::require_out(cfg.out);
  if (train_per_class < 0 || test_per_class < 0) {
    throw Error(ErrorKind::config, "per-class counts must be non-negative");
  }
  const JitterParams jitter = no_jitter ? JitterParams::none() : JitterParams{};
  const DatasetSplit data = generate(cfg.seed, train_per_class, test_per_class, jitter);
  OutputDir dir(cfg.out);
  for (const auto& [rel, bytes] : dataset_files(data)) dir.write(rel, bytes);
  dir.commit();
  out << "wrote " << data.train.size() << " train and " << data.test.size()
      << " test samples to " << cfg.out << "\n";
  return 0;
}

int cmd_train(const RunConfig& cfg, const std::string& train_config, std::optional<double> lr,
              std::optional<int> epochs, std::optional<int> batch, bool seed_given,
              std::ostream& out) {
  if (cfg.dataset.empty()) throw Error(ErrorKind::config, "--dataset is required");
  CommonOptions::require_dir(cfg.dataset, "--dataset");
  if (!train_config.empty()) CommonOptions::require_file(train_config, "--train-config");
  CommonOptions::require_out(cfg.out);

  TrainConfig tc = train_config.empty() ? TrainConfig{}
                                        : TrainConfig::from_json(CommonOptions::read_json(train_config));
  if (seed_given) tc.seed = cfg.seed;
  if (lr) tc.learning_rate = *lr;
  if (epochs) tc.epochs = *epochs;
  if (batch) tc.batch_size = *batch;

  const DatasetSplit data = open_dataset(cfg.dataset);
  spdlog::info("training on {} samples, testing on {}", data.train.size(), data.test.size());
  const TrainResult result = train(data, tc);

  OutputDir dir(cfg.out);
  dir.write("weights.json", save_weights(result.model).dump() + "\n");
  dir.write("train_log.csv", result.log_csv());
  dir.write("train_config.json", tc.to_json().dump(2) + "\n");
  dir.commit();

  out << "best_epoch=" << result.best_epoch
      << " train_acc=" << evaluate(result.model, data.train).accuracy()
      << " test_acc=" << evaluate(result.model, data.test).accuracy() << "\n";
  return 0;
}

int cmd_lower(const RunConfig& cfg, bool dump_masks, std::ostream& out) {
  CommonOptions::require_out(cfg.out);
  const BnnModel model = load_model(cfg);
  const LoweredProgram lowered = lower_model(model);
  const TimingReport timing = estimate(lowered.program, load_cost(cfg));

  OutputDir dir(cfg.out);
  dir.write("program.lst", disassemble(lowered.program));
  json plan = lowered.plan.to_json(lowered.program);
  plan["timing"] = timing.to_json();
  dir.write("plan.json", plan.dump(2) + "\n");
  if (dump_masks) {
    for (const auto& [name, pattern] : lowered.program.patterns) {
      dir.write("masks/" + name + ".pbm", pnm::encode_pbm(pattern));
    }
  }
  dir.commit();
  out << "instructions=" << lowered.program.instructions.size() << " " << timing.summary() << "\n";
  return 0;
}

int cmd_infer(const RunConfig& cfg, const std::vector<std::string>& images, int random_count,
              bool check, std::ostream& out) {
  for (const auto& p : images) CommonOptions::require_file(p, "image");
  if (images.empty() && random_count <= 0) {
    throw Error(ErrorKind::config, "give input images or --random N");
  }
  const BnnModel model = load_model(cfg);
  const LoweredProgram lowered = lower_model(model);
  const ArrayConfig ac = array_config(cfg);
  const bool exact = ac.mode == AnalogMode::ideal && ac.noise.kind == NoiseKind::none;
  const int side = model.geometry.block_size;

  std::vector<std::pair<std::string, BitImage>> inputs;
  for (const auto& p : images) inputs.emplace_back(p, host_prep(pnm::read_pgm(fs::path(p)), side));
  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < random_count; ++i) {
    inputs.emplace_back("random:" + std::to_string(i), random_input(rng, side));
  }

  std::size_t agree = 0;
  for (const auto& [name, input] : inputs) {
    const auto sums = run_lowered(lowered, input, ac);
    const int predicted = argmax(sums);
    const ClassScores ref = reference_infer(model, input);
    bool ok = predicted == ref.predicted;
    if (exact) {
      for (std::size_t c = 0; c < sums.size(); ++c) ok = ok && sums[c] == 4 * ref.scores[c];
    }
    agree += ok ? 1 : 0;
    out << name << " sums=" << join_sums(sums) << " predicted=" << model.class_names[predicted]
        << " oracle=" << (ok ? "agree" : "disagree") << "\n";
  }
  if (check) {
    out << "check: " << agree << "/" << inputs.size() << " oracle agreement\n";
    if (agree != inputs.size()) {
      throw Error(ErrorKind::program, "oracle disagreement on " +
                                          std::to_string(inputs.size() - agree) + " input(s)");
    }
  }
  return 0;
}

int cmd_bench(const RunConfig& cfg, bool json_out, std::ostream& out) {
  const BnnModel model = load_model(cfg);
  const LoweredProgram lowered = lower_model(model);
  const TimingReport report = estimate(lowered.program, load_cost(cfg));
  if (json_out) {
    out << report.to_json().dump(2) << "\n";
    return 0;
  }
  out << report.summary() << "\n";
  out << "instructions=" << report.total_instructions() << "\n";
  for (const auto& [op, n] : report.instruction_count) out << "  " << to_string(op) << " " << n << "\n";
  return 0;
}

struct LoopArgs {
  std::string frames;
  double fps = 0.0;
  std::int64_t duration_us = 1'000'000;
  int servos = 1;
};

/// Frames from a JSON sidecar: {"frames": [{"file": "x.pgm", "t_us": 0}, ...]},
/// file paths relative to the sidecar.
std::vector<TimedFrame> frames_from_sidecar(const std::string& path, int side) {
  const json doc = CommonOptions::read_json(path);
  if (!doc.is_object() || !doc.contains("frames") || !doc["frames"].is_array()) {
    throw Error(ErrorKind::config, path + ": expected {\"frames\": [...]}");
  }
  const fs::path base = fs::path(path).parent_path();
  std::vector<TimedFrame> frames;
  for (const auto& f : doc["frames"]) {
    try {
      const fs::path file = base / f.at("file").get<std::string>();
      if (!fs::is_regular_file(file)) throw Error(ErrorKind::io, file.string() + ": no such file");
      frames.push_back({f.at("t_us").get<std::int64_t>(), host_prep(pnm::read_pgm(file), side)});
    } catch (const json::exception& e) {
      throw Error(ErrorKind::config, path + ": frame " + std::to_string(frames.size()) + ": " +
                                         e.what());
    }
  }
  return frames;
}

int cmd_loop(const RunConfig& cfg, const LoopArgs& args, std::ostream& out) {
  if (args.frames.empty() == cfg.dataset.empty()) {
    throw Error(ErrorKind::config, "give exactly one of --frames or --dataset");
  }
  if (!args.frames.empty()) CommonOptions::require_file(args.frames, "--frames");
  if (!cfg.dataset.empty()) CommonOptions::require_dir(cfg.dataset, "--dataset");
  CommonOptions::require_out(cfg.out);
  if (args.duration_us <= 0) throw Error(ErrorKind::config, "--duration-us must be positive");
  if (args.servos < 1) throw Error(ErrorKind::config, "--servos must be at least 1");

  const BnnModel model = load_model(cfg);
  const LoweredProgram lowered = lower_model(model);
  const CostModel cost = load_cost(cfg);
  const ServoBank bank(std::vector<ServoModel>(static_cast<std::size_t>(args.servos)));

  std::vector<TimedFrame> frames;
  if (!args.frames.empty()) {
    frames = frames_from_sidecar(args.frames, model.geometry.block_size);
  } else {
    const DatasetSplit data = open_dataset(cfg.dataset);
    const auto& pool = data.test.empty() ? data.train : data.test;
    if (pool.empty()) throw Error(ErrorKind::dataset, cfg.dataset + ": no samples");
    double fps = args.fps;
    if (fps <= 0) {
      const TimingReport r = estimate(lowered.program, cost);
      fps = r.unbounded() ? 1e6 : static_cast<double>(r.fps_floor());
    }
    // Frame i is captured at floor(i * 1e6 / fps), cycling through the samples.
    for (std::int64_t i = 0;; ++i) {
      const auto t = static_cast<std::int64_t>(std::floor(static_cast<double>(i) * 1e6 / fps));
      if (t >= args.duration_us) break;
      frames.push_back({t, pool[static_cast<std::size_t>(i) % pool.size()].image});
    }
  }

  const ServoTimeline timeline =
      run_loop(frames, lowered, cost, bank, args.duration_us, array_config(cfg));
  const LoopSummary summary = summarize(timeline);

  OutputDir dir(cfg.out);
  dir.write("timeline.csv", timeline.to_csv());
  dir.write("summary.txt", summary.to_text() + "\n");
  dir.commit();
  out << summary.to_text() << "\n";
  return 0;
}

int cmd_dump(const RunConfig& cfg, const std::string& image, bool random, std::ostream& out) {
  if (image.empty() == !random) throw Error(ErrorKind::config, "give exactly one of --image or --random");
  if (!image.empty()) CommonOptions::require_file(image, "--image");
  CommonOptions::require_out(cfg.out);

  const BnnModel model = load_model(cfg);
  const LoweredProgram lowered = lower_model(model);
  const ArrayConfig ac = array_config(cfg);
  const int side = model.geometry.block_size;
  BitImage input;
  if (!image.empty()) {
    input = host_prep(pnm::read_pgm(fs::path(image)), side);
  } else {
    std::mt19937_64 rng(cfg.seed);
    input = random_input(rng, side);
  }

  const RegisterAssignment& regs = lowered.plan.registers;
  const std::map<std::string, std::pair<std::string, std::string>> captures{
      {"replicate", {"01_replicate.pgm", regs.replicated}},
      {"conv", {"02_conv.pgm", regs.accumulator}},
      {"relu", {"03_relu.pgm", regs.accumulator}},
      {"maxpool", {"04_maxpool.pgm", regs.accumulator}},
  };

  ArrayState state(ac);
  state.load_image(host_frame(input, ac.geometry), regs.input);
  OutputDir dir(cfg.out);
  dir.write("00_input.pgm", pnm::encode_pgm(pnm::analog_to_gray(state.analog(regs.input))));

  auto capture = [&](const StageSpan& span, const ArrayState& s) {
    auto it = captures.find(span.name);
    if (it == captures.end()) return;
    dir.write(it->second.first, pnm::encode_pgm(pnm::analog_to_gray(s.analog(it->second.second))));
    if (span.name == "relu") dir.write("03_relu_negative.pbm", pnm::encode_pbm(s.digital(regs.mask_neg).to_bits()));
  };
  for (const auto& span : lowered.plan.stages) {
    if (span.end == 0) capture(span, state);
  }
  const auto sums = execute(lowered.program, state, [&](std::size_t i, const Instruction& ins,
                                                        const ArrayState& s) {
    if (ins.op == Opcode::global_sum) {
      dir.write("05_fc_" + ins.symbol + ".pgm", pnm::encode_pgm(pnm::analog_to_gray(s.analog(ins.a))));
    }
    for (const auto& span : lowered.plan.stages) {
      if (span.end == i + 1) capture(span, s);
    }
  });
  for (const auto& [name, pattern] : lowered.program.patterns) {
    dir.write("masks/" + name + ".pbm", pnm::encode_pbm(pattern));
  }
  json summary{{"labels", lowered.program.labels}, {"sums", sums},
               {"predicted", model.class_names[argmax(sums)]}};
  dir.write("sums.json", summary.dump(2) + "\n");
  dir.commit();
  out << "sums=" << join_sums(sums) << " predicted=" << model.class_names[argmax(sums)] << "\n";
  return 0;
}

void configure_logging(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("scampsim", sink);
  logger->set_pattern("[%l] %v");
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("SCAMPSIM_LOG")) level = spdlog::level::from_str(env);
  logger->set_level(level);
  spdlog::set_default_logger(logger);
}

std::string one_line(std::string msg) {
  std::replace(msg.begin(), msg.end(), '\n', ' ');
  return msg;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  configure_logging(err);

  CLI::App app{"Pixel-processor-array simulator: binary CNN lowering, inference and servo loop"};
  app.name("scampsim");
  app.require_subcommand(1);
  app.footer("Environment: SCAMPSIM_LOG=trace|debug|info|warn|error|off sets log verbosity (default warn).");

  RunConfig cfg;
  CommonOptions common(cfg);

  auto* gen = app.add_subcommand("gen", "Generate the synthetic rock/paper/scissors dataset");
  int train_per_class = 500, test_per_class = 200;
  bool no_jitter = false;
  common.seed(gen, "Dataset seed");
  common.out(gen, "Output directory");
  common.config(gen);
  gen->add_option("--train-per-class", train_per_class)->capture_default_str();
  gen->add_option("--test-per-class", test_per_class)->capture_default_str();
  gen->add_flag("--no-jitter", no_jitter, "Render canonical poses only");

  auto* tr = app.add_subcommand("train", "Train binary weights on a dataset");
  std::string train_config;
  std::optional<double> lr;
  std::optional<int> epochs, batch;
  common.dataset(tr, "Dataset directory (gen output or class subdirectories)");
  common.out(tr, "Output directory for weights.json and train_log.csv");
  common.seed(tr, "Training seed (overrides --train-config)");
  common.config(tr);
  tr->add_option("--train-config", train_config, "Trainer JSON: seed, lr, epochs, batch_size, init_scale, k");
  tr->add_option("--lr", lr, "Learning rate");
  tr->add_option("--epochs", epochs, "Epoch budget");
  tr->add_option("--batch-size", batch, "Minibatch size");

  auto* lo = app.add_subcommand("lower", "Lower weights to a program listing and plan");
  bool dump_masks = false;
  common.weights(lo);
  common.cost_table(lo);
  common.out(lo, "Output directory for program.lst and plan.json");
  common.config(lo);
  lo->add_flag("--dump-masks", dump_masks, "Also write every pattern as PBM");

  auto* inf = app.add_subcommand("infer", "Run the lowered program on images");
  std::vector<std::string> images;
  int random_count = 0;
  bool check = false;
  common.weights(inf);
  common.seed(inf, "Seed for --random inputs and readout noise");
  common.array(inf);
  common.config(inf);
  inf->add_option("images", images, "Input PGM files (64x64 or full-plane captures)");
  inf->add_option("--random", random_count, "Also run N random binary inputs");
  inf->add_flag("--check", check, "Fail unless every input agrees with the dense reference");

  auto* be = app.add_subcommand("bench", "Report modelled latency and throughput");
  bool bench_json = false;
  common.weights(be);
  common.cost_table(be);
  common.config(be);
  be->add_flag("--json", bench_json, "Print the timing report as JSON");

  auto* lp = app.add_subcommand("loop", "Simulate the classifier driving servos");
  LoopArgs loop_args;
  common.weights(lp);
  common.dataset(lp, "Frame source: dataset directory (test split, cycled)");
  common.cost_table(lp);
  common.out(lp, "Output directory for timeline.csv and summary.txt");
  common.array(lp);
  common.seed(lp, "Unused by the noise-free loop; accepted for config symmetry");
  common.config(lp);
  lp->add_option("--frames", loop_args.frames, "Frame source: JSON sidecar {frames:[{file,t_us}]}");
  lp->add_option("--fps", loop_args.fps, "Frame rate for --dataset (default: modelled maximum)");
  lp->add_option("--duration-us", loop_args.duration_us, "Simulated duration")->capture_default_str();
  lp->add_option("--servos", loop_args.servos, "Servos driven in parallel")->capture_default_str();

  auto* du = app.add_subcommand("dump", "Write every intermediate plane of one inference");
  std::string dump_image;
  bool dump_random = false;
  common.weights(du);
  common.seed(du, "Seed for --random and readout noise");
  common.array(du);
  common.out(du, "Output directory");
  common.config(du);
  du->add_option("--image", dump_image, "Input PGM");
  du->add_flag("--random", dump_random, "Use a random binary input");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    common.apply_config_file(app.get_subcommands().front());
    if (!cfg.weights.empty()) CommonOptions::require_file(cfg.weights, "--weights");
    if (!cfg.cost_table.empty()) CommonOptions::require_file(cfg.cost_table, "--cost-table");

    if (gen->parsed()) return cmd_gen(cfg, train_per_class, test_per_class, no_jitter, out);
    if (tr->parsed()) {
      return cmd_train(cfg, train_config, lr, epochs, batch, common.given("seed"), out);
    }
    if (lo->parsed()) return cmd_lower(cfg, dump_masks, out);
    if (inf->parsed()) return cmd_infer(cfg, images, random_count, check, out);
    if (be->parsed()) return cmd_bench(cfg, bench_json, out);
    if (lp->parsed()) return cmd_loop(cfg, loop_args, out);
    if (du->parsed()) return cmd_dump(cfg, dump_image, dump_random, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.kind()) << ": " << one_line(e.what()) << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: internal: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 1;
}

}  // namespace scampsim::cli
