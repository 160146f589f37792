// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>
#include <unistd.h>

#include "cli.hpp"
#include "output_dir.hpp"
#include "scampsim/gesture_data.hpp"
#include "scampsim/pnm.hpp"

namespace scampsim {
namespace {

namespace fs = std::filesystem;

struct Result {
  int status = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    static int counter = 0;
    root_ = fs::temp_directory_path() /
            ("scampsim_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  std::string path(const std::string& rel) const { return (root_ / rel).string(); }

  void write(const std::string& rel, const std::string& bytes) const {
    fs::create_directories((root_ / rel).parent_path());
    std::ofstream(root_ / rel, std::ios::binary) << bytes;
  }

  /// Every file under dir, keyed by relative path.
  static std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (!e.is_regular_file()) continue;
      std::ifstream in(e.path(), std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      files[fs::relative(e.path(), dir).string()] = ss.str();
    }
    return files;
  }

  fs::path root_;
};

void expect_single_error_line(const Result& r, const std::string& kind) {
  EXPECT_NE(r.status, 0);
  EXPECT_EQ(r.err.rfind("error: " + kind + ": ", 0), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1) << r.err;
}

TEST_F(CliTest, BenchReportsCalibratedTiming) {
  const Result r = run({"bench"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "latency_us=121.0 fps=8264");
  EXPECT_NE(r.out.find("instructions=117"), std::string::npos);
  const Result j = run({"bench", "--json"});
  ASSERT_EQ(j.status, 0);
  const auto doc = nlohmann::json::parse(j.out);
  EXPECT_DOUBLE_EQ(doc["latency_us"].get<double>(), 121.0);
}

TEST_F(CliTest, BenchHonoursCostTable) {
  write("cost.json", R"({"overhead_us": 0, "add": 1, "sub": 1, "neg": 1, "copy": 1, "max": 1,
    "shift": 1, "threshold": 1, "global_sum": 1, "and": 1, "or": 1, "xor": 1, "not": 1,
    "write_pattern": 1})");
  const Result r = run({"bench", "--cost-table", path("cost.json")});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "latency_us=117.0 fps=8547");
}

TEST_F(CliTest, InferBlackImageIsRock) {
  write("black.pgm", pnm::encode_pgm(GrayImage(256, 256, 0)));
  const Result r = run({"infer", path("black.pgm")});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("sums=0,0,0 predicted=rock oracle=agree"), std::string::npos) << r.out;
}

TEST_F(CliTest, InferCheckOnHundredRandomImages) {
  const Result r = run({"infer", "--random", "100", "--check", "--seed", "3"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("check: 100/100 oracle agreement"), std::string::npos);
  EXPECT_EQ(r.out.find("disagree"), std::string::npos);
}

TEST_F(CliTest, InferWithNoiseAndSaturation) {
  const Result r = run({"infer", "--random", "3", "--noise-sigma", "50", "--mode", "saturating"});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
}

TEST_F(CliTest, ErrorsAreSingleLines) {
  expect_single_error_line(run({"infer", path("missing.pgm")}), "io");
  expect_single_error_line(run({"bench", "--weights", path("missing.json")}), "io");
  write("bad_weights.json", R"({"version": 1})");
  expect_single_error_line(run({"bench", "--weights", path("bad_weights.json")}), "weights");
  write("bad_cost.json", R"({"add": 1})");
  expect_single_error_line(run({"bench", "--cost-table", path("bad_cost.json")}), "cost_table");
  expect_single_error_line(run({"infer"}), "config");
  expect_single_error_line(run({"gen"}), "config");
  expect_single_error_line(run({"train", "--dataset", path("nope"), "--out", path("o")}), "io");
  expect_single_error_line(run({"bench", "--bogus"}), "usage");
  expect_single_error_line(run({}), "usage");
  expect_single_error_line(run({"infer", "--random", "1", "--mode", "quantum"}), "usage");
  EXPECT_EQ(run({"bench", "--bogus"}).status, 2);
}

TEST_F(CliTest, HelpDocumentsFlagsAndEnvironment) {
  const Result top = run({"--help"});
  EXPECT_EQ(top.status, 0);
  EXPECT_NE(top.out.find("SCAMPSIM_LOG"), std::string::npos);
  for (const char* cmd : {"gen", "train", "lower", "infer", "bench", "loop", "dump"}) {
    EXPECT_NE(top.out.find(cmd), std::string::npos) << cmd;
  }
  const Result infer = run({"infer", "--help"});
  EXPECT_EQ(infer.status, 0);
  for (const char* flag : {"--weights", "--seed", "--noise-sigma", "--mode"}) {
    EXPECT_NE(infer.out.find(flag), std::string::npos) << flag;
  }
  const Result loop = run({"loop", "--help"});
  for (const char* flag : {"--dataset", "--cost-table", "--out"}) {
    EXPECT_NE(loop.out.find(flag), std::string::npos) << flag;
  }
}

TEST_F(CliTest, ConfigFileFillsUnsetFlags) {
  write("black.pgm", pnm::encode_pgm(GrayImage(64, 64, 0)));
  write("cfg.json", R"({"mode": "saturating", "seed": 5})");
  EXPECT_EQ(run({"infer", path("black.pgm"), "--config", path("cfg.json")}).status, 0);
  write("bad.json", R"({"mode": "quantum"})");
  expect_single_error_line(run({"infer", path("black.pgm"), "--config", path("bad.json")}), "config");
  write("foreign.json", R"({"dataset": "x"})");
  expect_single_error_line(run({"infer", path("black.pgm"), "--config", path("foreign.json")}),
                           "config");
  // An explicit flag wins over the file.
  EXPECT_EQ(run({"infer", path("black.pgm"), "--config", path("bad.json"), "--mode", "ideal"}).status,
            0);
}

TEST_F(CliTest, GenTrainLowerPipeline) {
  ASSERT_EQ(run({"gen", "--seed", "4", "--train-per-class", "6", "--test-per-class", "3", "--out",
                 path("ds")})
                .status,
            0);
  EXPECT_TRUE(fs::exists(path("ds/manifest.json")));
  EXPECT_EQ(load_dataset(path("ds")).train.size(), 18u);

  write("tc.json", R"({"epochs": 1, "batch_size": 4})");
  const Result t = run({"train", "--dataset", path("ds"), "--train-config", path("tc.json"), "--out",
                        path("model")});
  ASSERT_EQ(t.status, 0) << t.err;
  EXPECT_TRUE(fs::exists(path("model/weights.json")));
  EXPECT_TRUE(fs::exists(path("model/train_log.csv")));

  const Result l = run({"lower", "--weights", path("model/weights.json"), "--out", path("low"),
                        "--dump-masks"});
  ASSERT_EQ(l.status, 0) << l.err;
  EXPECT_TRUE(fs::exists(path("low/program.lst")));
  EXPECT_TRUE(fs::exists(path("low/plan.json")));
  EXPECT_TRUE(fs::exists(path("low/masks/border.pbm")));
}

TEST_F(CliTest, LoopAndDumpOutputs) {
  write("f0.pgm", pnm::encode_pgm(GrayImage(64, 64, 255)));
  write("f1.pgm", pnm::encode_pgm(GrayImage(256, 256, 0)));
  write("frames.json", R"({"frames": [{"file": "f0.pgm", "t_us": 0}, {"file": "f1.pgm", "t_us": 4000}]})");
  const Result l = run({"loop", "--frames", path("frames.json"), "--duration-us", "20000", "--out",
                        path("loop")});
  ASSERT_EQ(l.status, 0) << l.err;
  EXPECT_NE(l.out.find("frames=2 latched=2"), std::string::npos) << l.out;
  EXPECT_TRUE(fs::exists(path("loop/timeline.csv")));
  EXPECT_TRUE(fs::exists(path("loop/summary.txt")));

  write("bad_frames.json", R"({"frames": [{"file": "nothere.pgm", "t_us": 0}]})");
  expect_single_error_line(run({"loop", "--frames", path("bad_frames.json"), "--out", path("l2")}), "io");
  EXPECT_FALSE(fs::exists(path("l2")));
  expect_single_error_line(run({"loop", "--frames", path("frames.json"), "--servos", "6", "--out",
                                path("l3")}),
                           "servo");

  const Result d = run({"dump", "--random", "--seed", "2", "--out", path("dump")});
  ASSERT_EQ(d.status, 0) << d.err;
  for (const char* f : {"00_input.pgm", "01_replicate.pgm", "02_conv.pgm", "03_relu.pgm",
                        "03_relu_negative.pbm", "04_maxpool.pgm", "05_fc_rock.pgm",
                        "05_fc_paper.pgm", "05_fc_scissors.pgm", "sums.json"}) {
    EXPECT_TRUE(fs::exists(path("dump/") + f)) << f;
  }
}

TEST_F(CliTest, CommandsAreByteReproducible) {
  const std::vector<std::vector<std::string>> commands = {
      {"gen", "--seed", "9", "--train-per-class", "4", "--test-per-class", "2"},
      {"lower", "--dump-masks"},
      {"dump", "--random", "--seed", "5", "--mode", "saturating"},
  };
  for (const auto& base : commands) {
    auto a = base, b = base;
    a.insert(a.end(), {"--out", path("a")});
    b.insert(b.end(), {"--out", path("b")});
    ASSERT_EQ(run(a).status, 0) << base[0];
    ASSERT_EQ(run(b).status, 0) << base[0];
    EXPECT_EQ(snapshot(path("a")), snapshot(path("b"))) << base[0];
    fs::remove_all(path("a"));
    fs::remove_all(path("b"));
  }
  ASSERT_EQ(run({"gen", "--seed", "1", "--train-per-class", "5", "--test-per-class", "2", "--out",
                 path("ds")})
                .status,
            0);
  for (const auto& base : std::vector<std::vector<std::string>>{
           {"train", "--dataset", path("ds"), "--epochs", "1"},
           {"loop", "--dataset", path("ds"), "--duration-us", "50000"}}) {
    auto a = base, b = base;
    a.insert(a.end(), {"--out", path("a")});
    b.insert(b.end(), {"--out", path("b")});
    ASSERT_EQ(run(a).status, 0) << base[0];
    ASSERT_EQ(run(b).status, 0) << base[0];
    EXPECT_EQ(snapshot(path("a")), snapshot(path("b"))) << base[0];
    fs::remove_all(path("a"));
    fs::remove_all(path("b"));
  }
  const Result i1 = run({"infer", "--random", "5", "--seed", "8", "--noise-sigma", "4"});
  const Result i2 = run({"infer", "--random", "5", "--seed", "8", "--noise-sigma", "4"});
  EXPECT_EQ(i1.out, i2.out);
}

TEST_F(CliTest, UncommittedOutputLeavesNothing) {
  {
    cli::OutputDir dir(path("staged"));
    dir.write("a/b.txt", "hello");
  }
  EXPECT_FALSE(fs::exists(path("staged")));
  EXPECT_FALSE(fs::exists(path("staged.staging")));
  {
    cli::OutputDir dir(path("staged"));
    dir.write("a/b.txt", "hello");
    dir.commit();
  }
  EXPECT_EQ(snapshot(path("staged")).at("a/b.txt"), "hello");
}

}  // namespace
}  // namespace scampsim
