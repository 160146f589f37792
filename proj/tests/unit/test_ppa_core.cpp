// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "scampsim/array_state.hpp"
#include "scampsim/error.hpp"
#include "scampsim/geometry.hpp"
#include "scampsim/planes.hpp"

namespace scampsim {
namespace {

using testing::fill_plane;
using testing::random_bits;
using testing::random_values;

constexpr std::size_t kPixels = 256 * 256;

ArrayConfig saturating_config() {
  ArrayConfig c;
  c.mode = AnalogMode::saturating;
  return c;
}

std::vector<std::int64_t> values_of(const AnalogPlane& p) {
  return {p.values().begin(), p.values().end()};
}

BitImage checkerboard(int h, int w) {
  BitImage m(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) m.at(r, c) = (r + c) % 2;
  return m;
}

TEST(Geometry, DefaultTilingIndexesBlocksRowMajor) {
  PlaneGeometry g;
  g.validate();
  EXPECT_EQ(g.num_blocks(), 16);
  EXPECT_EQ(g.block_index(0, 0), 0);
  EXPECT_EQ(g.block_index(0, 64), 1);
  EXPECT_EQ(g.block_index(64, 0), 4);
  EXPECT_EQ(g.block_index(255, 255), 15);
  EXPECT_EQ(g.block_index(130, 200), 4 * 2 + 3);
}

TEST(Geometry, RejectsMismatchedSides) {
  PlaneGeometry g{256, 255, 4, 64};
  try {
    g.validate();
    FAIL() << "expected geometry error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::geometry);
  }
  EXPECT_THROW((PlaneGeometry{0, 0, 0, 64}.validate()), Error);
  EXPECT_NO_THROW(PlaneGeometry::tiled(2, 8).validate());
}

TEST(LoadImage, AllBlackIsZero) {
  ArrayState s;
  s.load_image(GrayImage(256, 256, 0), "PIX");
  for (auto v : s.analog("PIX").values()) ASSERT_EQ(v, 0);
}

TEST(LoadImage, AllWhiteIdealIs255) {
  ArrayState s;
  s.load_image(GrayImage(256, 256, 255), "A");
  for (auto v : s.analog("A").values()) ASSERT_EQ(v, 255);
}

TEST(LoadImage, AllWhiteSaturatingClampsTo127) {
  ArrayState s(saturating_config());
  s.load_image(GrayImage(256, 256, 255), "A");
  for (auto v : s.analog("A").values()) ASSERT_EQ(v, 127);
}

TEST(LoadImage, WrongSizeAndUnknownRegisterRejected) {
  ArrayState s;
  try {
    s.load_image(GrayImage(64, 64), "A");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::geometry);
  }
  try {
    s.load_image(GrayImage(256, 256), "Q");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::register_name);
  }
}

TEST(Threshold, StrictInequality) {
  PlaneGeometry g;
  AnalogPlane zeros(g);
  EXPECT_EQ(threshold(zeros, 0).count(), 0u);
  AnalogPlane ones(g);
  ones.fill(1);
  EXPECT_EQ(threshold(ones, 0).count(), kPixels);
}

TEST(Threshold, MatchesPerPixelComparison) {
  std::mt19937_64 rng(11);
  ArrayState s;
  const auto v = random_values(rng, kPixels, -200, 200);
  fill_plane(s.analog("A"), v);
  s.threshold("R1", "A", 64);
  const auto bits = s.digital("R1").bits();
  for (std::size_t i = 0; i < kPixels; ++i) ASSERT_EQ(bits[i], v[i] > 64 ? 1 : 0) << i;
}

TEST(Arithmetic, AdditiveIdentityAndSelfSubtraction) {
  std::mt19937_64 rng(1);
  ArrayState s;
  const auto a = random_values(rng, kPixels, -1000, 1000);
  fill_plane(s.analog("A"), a);
  s.add("C", "A", "B");  // B starts at zero
  EXPECT_EQ(values_of(s.analog("C")), a);
  s.sub("D", "A", "A");
  for (auto v : s.analog("D").values()) ASSERT_EQ(v, 0);
}

TEST(Arithmetic, CheckerboardMaskKeepsPriorValues) {
  std::mt19937_64 rng(2);
  ArrayState s;
  const auto a = random_values(rng, kPixels, -50, 50);
  const auto b = random_values(rng, kPixels, -50, 50);
  const auto prior = random_values(rng, kPixels, -50, 50);
  fill_plane(s.analog("A"), a);
  fill_plane(s.analog("B"), b);
  fill_plane(s.analog("C"), prior);
  s.write_pattern("R1", checkerboard(256, 256));
  s.add("C", "A", "B", "R1");
  const auto out = values_of(s.analog("C"));
  for (int r = 0; r < 256; ++r) {
    for (int c = 0; c < 256; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * 256 + c;
      ASSERT_EQ(out[i], (r + c) % 2 ? a[i] + b[i] : prior[i]);
    }
  }
}

TEST(Arithmetic, NegAndCopy) {
  std::mt19937_64 rng(3);
  ArrayState s;
  const auto a = random_values(rng, kPixels, -9, 9);
  fill_plane(s.analog("A"), a);
  s.neg("B", "A");
  s.copy("C", "A");
  const auto nb = values_of(s.analog("B"));
  for (std::size_t i = 0; i < kPixels; ++i) ASSERT_EQ(nb[i], -a[i]);
  EXPECT_EQ(values_of(s.analog("C")), a);
}

TEST(Shift, ZeroStepsIsIdentity) {
  std::mt19937_64 rng(4);
  ArrayState s;
  const auto a = random_values(rng, kPixels, -9, 9);
  fill_plane(s.analog("A"), a);
  for (auto d : {Direction::north, Direction::south, Direction::east, Direction::west}) {
    s.shift("B", "A", d, 0);
    EXPECT_EQ(values_of(s.analog("B")), a);
  }
}

TEST(Shift, SinglePixelMovesNorth) {
  ArrayState s;
  s.analog("A").set(10, 10, 7);
  s.shift("B", "A", Direction::north, 1);
  EXPECT_EQ(s.analog("B").at(9, 10), 7);
  EXPECT_EQ(s.analog("B").at(10, 10), 0);
  s.shift("B", "A", Direction::south, 2);
  EXPECT_EQ(s.analog("B").at(12, 10), 7);
  s.shift("B", "A", Direction::east, 3);
  EXPECT_EQ(s.analog("B").at(10, 13), 7);
  s.shift("B", "A", Direction::west, 4);
  EXPECT_EQ(s.analog("B").at(10, 6), 7);
}

TEST(Shift, FullWidthEvacuates) {
  ArrayState s;
  s.analog("A").fill(5);
  s.shift("B", "A", Direction::east, 256);
  for (auto v : s.analog("B").values()) ASSERT_EQ(v, 0);
  s.shift("B", "A", Direction::north, 1000);
  for (auto v : s.analog("B").values()) ASSERT_EQ(v, 0);
}

TEST(Shift, MatchesCoordinateOracleInPlace) {
  std::mt19937_64 rng(5);
  const std::pair<Direction, std::pair<int, int>> cases[] = {
      {Direction::north, {1, 0}}, {Direction::south, {-1, 0}},
      {Direction::east, {0, -1}}, {Direction::west, {0, 1}}};
  for (const auto& [dir, unit] : cases) {
    ArrayState s;
    const auto a = random_values(rng, kPixels, -99, 99);
    fill_plane(s.analog("A"), a);
    s.shift("A", "A", dir, 5);
    EXPECT_EQ(values_of(s.analog("A")),
              testing::shifted(a, 256, 256, 5 * unit.first, 5 * unit.second))
        << to_string(dir);
  }
}

TEST(Shift, NegativeStepsRejected) {
  ArrayState s;
  EXPECT_THROW(s.shift("A", "B", Direction::north, -1), Error);
}

TEST(Shift, CompositionAddsSteps) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    ArrayState s;
    fill_plane(s.analog("A"), random_values(rng, kPixels, -99, 99));
    const int a = static_cast<int>(rng() % 40);
    const int b = static_cast<int>(rng() % 40);
    const auto dir = static_cast<Direction>(rng() % 4);
    s.shift("B", "A", dir, a);
    s.shift("B", "B", dir, b);
    s.shift("C", "A", dir, a + b);
    ASSERT_EQ(s.analog("B"), s.analog("C"));
  }
}

TEST(MaxCombine, IdempotentAndZeroIdentity) {
  std::mt19937_64 rng(7);
  ArrayState s;
  const auto a = random_values(rng, kPixels, 0, 99);
  fill_plane(s.analog("A"), a);
  s.max_combine("B", "A", "A");
  EXPECT_EQ(values_of(s.analog("B")), a);
  s.max_combine("C", "A", "D");  // D all zero
  EXPECT_EQ(values_of(s.analog("C")), a);
}

TEST(MaxCombine, MatchesElementwiseOracle) {
  std::mt19937_64 rng(8);
  ArrayState s;
  const auto a = random_values(rng, kPixels, -99, 99);
  const auto b = random_values(rng, kPixels, -99, 99);
  fill_plane(s.analog("A"), a);
  fill_plane(s.analog("B"), b);
  s.max_combine("C", "A", "B");
  const auto c = values_of(s.analog("C"));
  for (std::size_t i = 0; i < kPixels; ++i) ASSERT_EQ(c[i], std::max(a[i], b[i]));
}

TEST(GlobalSum, ZeroAndSinglePixel) {
  ArrayState s;
  EXPECT_EQ(s.global_sum("A"), 0);
  s.analog("A").set(100, 3, 5);
  EXPECT_EQ(s.global_sum("A"), 5);
}

TEST(GlobalSum, EqualsIntegerFoldOnRandomPlanes) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    ArrayState s;
    const auto a = random_values(rng, kPixels, -100000, 100000);
    fill_plane(s.analog("A"), a);
    std::int64_t fold = 0;
    for (auto v : a) fold += v;
    ASSERT_EQ(s.global_sum("A"), fold);
  }
}

TEST(GlobalSum, NoiseIsSeededAndCentred) {
  NoiseModel model{NoiseKind::gaussian, 8.0, 42};
  NoiseSource a(model), b(model);
  double mean = 0.0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    const auto x = a.perturb(1000);
    ASSERT_EQ(x, b.perturb(1000));
    mean += static_cast<double>(x - 1000);
  }
  mean /= n;
  // Standard error is 8 / sqrt(4000) ~ 0.13.
  EXPECT_LT(std::abs(mean), 0.6);
  NoiseSource off;
  EXPECT_EQ(off.perturb(17), 17);
}

TEST(DregLogic, Identities) {
  std::mt19937_64 rng(10);
  ArrayState s;
  const BitImage a = random_bits(rng, 256, 256);
  s.write_pattern("R1", a);
  s.write_pattern("R2", BitImage(256, 256, 1));
  s.dreg_logic("R3", "R1", "R2", LogicOp::op_and);
  EXPECT_EQ(s.digital("R3").to_bits(), a);
  s.dreg_logic("R3", "R1", "R1", LogicOp::op_xor);
  EXPECT_EQ(s.digital("R3").count(), 0u);
  s.dreg_logic("R4", "R1", "R1", LogicOp::op_not);
  s.dreg_logic("R4", "R4", "R4", LogicOp::op_not);
  EXPECT_EQ(s.digital("R4").to_bits(), a);
  s.dreg_logic("R5", "R1", "R2", LogicOp::op_or);
  EXPECT_EQ(s.digital("R5").count(), kPixels);
}

TEST(WritePattern, AllOnesAndBlockZero) {
  ArrayState s;
  s.write_pattern("R1", BitImage(256, 256, 1));
  EXPECT_EQ(s.digital("R1").count(), kPixels);

  BitImage block0(256, 256);
  for (int r = 0; r < 64; ++r)
    for (int c = 0; c < 64; ++c) block0.at(r, c) = 1;
  s.write_pattern("R2", block0);
  const auto& p = s.digital("R2");
  for (int r = 0; r < 256; ++r)
    for (int c = 0; c < 256; ++c) ASSERT_EQ(p.at(r, c), r < 64 && c < 64 ? 1 : 0);
}

TEST(WritePattern, WrongSizeRejected) {
  ArrayState s;
  EXPECT_THROW(s.write_pattern("R1", BitImage(64, 64)), Error);
}

TEST(RegisterFile, DefaultsAndUnknownNames) {
  ArrayState s;
  for (const char* n : {"A", "B", "C", "D", "E", "F", "PIX"}) EXPECT_TRUE(s.has_analog(n));
  EXPECT_EQ(s.digital_bank().size(), 13u);  // R1..R12 plus FLAG
  EXPECT_TRUE(s.has_digital("FLAG"));
  try {
    s.add("A", "A", "G");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::register_name);
  }
  ArrayConfig bad;
  bad.registers.analog = {"A", "A"};
  EXPECT_THROW(ArrayState{bad}, Error);
  bad.registers.analog = {"A"};
  bad.registers.digital = {"FLAG"};
  EXPECT_THROW(ArrayState{bad}, Error);
}

// Properties -----------------------------------------------------------------

/// Applies one random operation drawn from the whole instruction repertoire.
void random_op(ArrayState& s, std::mt19937_64& rng, bool masked) {
  static const char* analog[] = {"A", "B", "C", "D"};
  static const char* digital[] = {"R1", "R2"};
  auto pick = [&](auto& arr) { return arr[rng() % std::size(arr)]; };
  std::optional<std::string_view> mask;
  if (masked) mask = pick(digital);
  switch (rng() % 7) {
    case 0: s.add(pick(analog), pick(analog), pick(analog), mask); break;
    case 1: s.sub(pick(analog), pick(analog), pick(analog), mask); break;
    case 2: s.neg(pick(analog), pick(analog), mask); break;
    case 3: s.copy(pick(analog), pick(analog), mask); break;
    case 4: s.max_combine(pick(analog), pick(analog), pick(analog), mask); break;
    case 5: s.shift(pick(analog), pick(analog), static_cast<Direction>(rng() % 4),
                    static_cast<int>(rng() % 5)); break;
    default: s.threshold(pick(digital), pick(analog), static_cast<std::int64_t>(rng() % 20) - 10);
  }
}

void seed_state(ArrayState& s, std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  for (const char* n : {"A", "B", "C", "D"}) fill_plane(s.analog(n), random_values(rng, kPixels, lo, hi));
  s.write_pattern("R1", random_bits(rng, 256, 256));
  s.write_pattern("R2", random_bits(rng, 256, 256));
}

TEST(Properties, DeterministicWithoutNoise) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 init(seed);
    ArrayState s1, s2;
    seed_state(s1, init, -50, 50);
    std::mt19937_64 init2(seed);
    seed_state(s2, init2, -50, 50);
    std::mt19937_64 ops1(seed + 100), ops2(seed + 100);
    for (int i = 0; i < 40; ++i) {
      random_op(s1, ops1, i % 2);
      random_op(s2, ops2, i % 2);
    }
    ASSERT_TRUE(s1 == s2);
  }
}

TEST(Properties, MaskedFrameRule) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    ArrayState s;
    seed_state(s, rng, -50, 50);
    const auto before = values_of(s.analog("C"));
    const auto mask = s.digital("R1").to_bits();
    switch (trial % 5) {
      case 0: s.add("C", "A", "B", "R1"); break;
      case 1: s.sub("C", "A", "B", "R1"); break;
      case 2: s.neg("C", "A", "R1"); break;
      case 3: s.copy("C", "A", "R1"); break;
      default: s.max_combine("C", "A", "B", "R1");
    }
    const auto after = values_of(s.analog("C"));
    for (std::size_t i = 0; i < kPixels; ++i) {
      if (!mask.bits[i]) ASSERT_EQ(after[i], before[i]);
    }
  }
}

TEST(Properties, SaturationIsClampOfIdeal) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint64_t seed = rng();
    std::mt19937_64 a(seed), b(seed);
    ArrayState ideal, sat(saturating_config());
    seed_state(ideal, a, -128, 127);
    seed_state(sat, b, -128, 127);
    std::mt19937_64 oa(seed + 1), ob(seed + 1);
    random_op(ideal, oa, trial % 2);
    random_op(sat, ob, trial % 2);
    for (const char* n : {"A", "B", "C", "D"}) {
      const auto vi = ideal.analog(n).values();
      const auto vs = sat.analog(n).values();
      for (std::size_t i = 0; i < kPixels; ++i) {
        ASSERT_EQ(vs[i], std::clamp<std::int64_t>(vi[i], -128, 127)) << n << " " << i;
      }
    }
    for (const char* n : {"R1", "R2"}) ASSERT_EQ(ideal.digital(n), sat.digital(n));
  }
}

}  // namespace
}  // namespace scampsim
