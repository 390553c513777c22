// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rsrt/error.h"
#include "rsrt/vad.h"
#include "test_util.h"

namespace rsrt {
namespace {

using testing::ConstantFrames;

constexpr double kEps = 1e-5;

TEST(VadTest, EnergiesAreLinearMeans) {
  const auto floor = FrameEnergies(MelSpectrogram(3, SpectrogramConfig{}));
  for (double e : floor) EXPECT_NEAR(e, 1e-5, 1e-11);

  EXPECT_NEAR(FrameEnergies(ConstantFrames({0.2}))[0], 0.2, 1e-7);

  MelSpectrogram mixed = ConstantFrames({0.2});
  for (std::size_t j = 0; j < 40; ++j) mixed.at(0, j) = static_cast<float>(std::log(0.4));
  EXPECT_NEAR(FrameEnergies(mixed)[0], 0.3, 1e-7);
}

TEST(VadTest, HandTracedRegion) {
  const VadResult r = DetectActiveRegion(ConstantFrames({kEps, 0.9, 1.0, 0.95, kEps}), 0.85);
  EXPECT_NEAR(r.threshold, 0.85, 1e-6);
  ASSERT_TRUE(r.region);
  EXPECT_EQ(*r.region, (FrameRegion{1, 3}));
}

TEST(VadTest, SingleFrameIsItsOwnRegion) {
  const VadResult r = DetectActiveRegion(ConstantFrames({0.5}));
  ASSERT_TRUE(r.region);
  EXPECT_EQ(*r.region, (FrameRegion{0, 0}));
}

TEST(VadTest, InteriorDipIsKept) {
  const VadResult r = DetectActiveRegion(ConstantFrames({1.0, 0.5, 1.0}), 0.85);
  EXPECT_EQ(*r.region, (FrameRegion{0, 2}));
}

TEST(VadTest, RejectsCoefficientOutsideOpenInterval) {
  const auto spec = ConstantFrames({1.0});
  for (double mu : {0.0, 1.0, -0.1, 1.5}) {
    try {
      DetectActiveRegion(spec, mu);
      FAIL() << mu;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInvalidArgument);
    }
  }
}

TEST(VadTest, SplitArithmetic) {
  const auto spec = ConstantFrames({kEps, 0.9, 1.0, 0.95, kEps});
  const RegionSplit s = SplitByRegion(spec, DetectActiveRegion(spec));
  EXPECT_EQ(s.leading, 1u);
  EXPECT_EQ(s.active.frames(), 3u);
  EXPECT_EQ(s.trailing, 1u);
  EXPECT_EQ(s.active, spec.Slice(1, 3));

  VadResult full;
  full.region = FrameRegion{0, 4};
  const RegionSplit all = SplitByRegion(spec, full);
  EXPECT_EQ(all.leading, 0u);
  EXPECT_EQ(all.trailing, 0u);
  EXPECT_EQ(all.active, spec);

  const auto three = ConstantFrames({0.1, 0.2, 0.3});
  VadResult last;
  last.region = FrameRegion{2, 2};
  const RegionSplit tail = SplitByRegion(three, last);
  EXPECT_EQ(tail.leading, 2u);
  EXPECT_EQ(tail.active.frames(), 1u);
  EXPECT_EQ(tail.trailing, 0u);

  VadResult beyond;
  beyond.region = FrameRegion{2, 3};
  try {
    SplitByRegion(three, beyond);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRegionMismatch);
  }
}

// Region found by a direct scan of the energy list.
FrameRegion ScanSpan(const std::vector<double>& e, double mu) {
  const double thr = mu * *std::max_element(e.begin(), e.end());
  std::size_t first = e.size(), last = 0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] >= thr) {
      first = std::min(first, i);
      last = i;
    }
  }
  return {first, last};
}

TEST(VadTest, RandomSpectrogramProperties) {
  std::mt19937 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t frames = 1 + gen() % 120;
    const auto spec = testing::RandomSpectrogram(frames, gen(), 80, -11.0f, 1.0f);
    for (double mu : {0.3, 0.85, 0.99}) {
      const VadResult r = DetectActiveRegion(spec, mu);
      ASSERT_TRUE(r.region);
      const auto max_it = std::max_element(r.energies.begin(), r.energies.end());
      const auto argmax = static_cast<std::size_t>(max_it - r.energies.begin());
      EXPECT_LE(r.region->start, argmax);
      EXPECT_GE(r.region->end, argmax);
      EXPECT_EQ(*r.region, ScanSpan(r.energies, mu));
      EXPECT_GE(r.energies[r.region->start], r.threshold);
      EXPECT_GE(r.energies[r.region->end], r.threshold);

      const RegionSplit s = SplitByRegion(spec, r);
      EXPECT_EQ(s.leading + s.active.frames() + s.trailing, frames);
    }
  }
}

TEST(VadTest, RegionIsScaleInvariant) {
  std::mt19937 gen(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto spec = testing::RandomSpectrogram(40, gen(), 80, -2.0f, 2.0f);
    const auto base = *DetectActiveRegion(spec).region;
    for (double gain_db : {-40.0, -6.0, 6.0, 40.0}) {
      std::vector<float> shifted = spec.data();
      const float ln_c = static_cast<float>(gain_db / 20.0 * std::log(10.0));
      for (auto& v : shifted) v += ln_c;
      const MelSpectrogram scaled(40, spec.config(), std::move(shifted));
      EXPECT_EQ(*DetectActiveRegion(scaled).region, base) << gain_db;
    }
  }
}

}  // namespace
}  // namespace rsrt
