// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "scampsim/bnn_model.hpp"
#include "scampsim/executor.hpp"
#include "scampsim/gesture_data.hpp"
#include "scampsim/lowering.hpp"
#include "scampsim/servo.hpp"

namespace {

using namespace scampsim;

BitImage random_input(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution bit(0.5);
  BitImage x(64, 64);
  for (auto& v : x.bits) v = bit(rng);
  return x;
}

void BM_ReferenceInfer(benchmark::State& state) {
  const BnnModel model = default_model();
  const BitImage x = random_input(1);
  for (auto _ : state) benchmark::DoNotOptimize(reference_infer(model, x));
}
BENCHMARK(BM_ReferenceInfer)->Unit(benchmark::kMicrosecond);

void BM_LowerModel(benchmark::State& state) {
  const BnnModel model = make_random_model(2, PlaneGeometry{}, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(lower_model(model));
}
BENCHMARK(BM_LowerModel)->DenseRange(1, 5)->Unit(benchmark::kMicrosecond);

void BM_ExecuteLowered(benchmark::State& state) {
  const LoweredProgram lowered = lower_model(default_model());
  const BitImage x = random_input(3);
  ArrayConfig config;
  config.mode = state.range(0) ? AnalogMode::saturating : AnalogMode::ideal;
  for (auto _ : state) benchmark::DoNotOptimize(run_lowered(lowered, x, config));
}
BENCHMARK(BM_ExecuteLowered)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_GenerateSample(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(generate(seed++, 1, 0));
}
BENCHMARK(BM_GenerateSample)->Unit(benchmark::kMicrosecond);

void BM_SimulateLoop(benchmark::State& state) {
  std::vector<ClassifiedFrame> frames;
  for (std::int64_t i = 0; i < 8264; ++i) frames.push_back({i * 121, static_cast<int>(i % 3)});
  const ServoBank bank(std::vector<ServoModel>(5));
  for (auto _ : state) benchmark::DoNotOptimize(simulate_loop(frames, 121, bank, 1'000'000));
}
BENCHMARK(BM_SimulateLoop)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
