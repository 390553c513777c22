// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "rsrt/error.h"
#include "rsrt/rng.h"
#include "rsrt/trigger.h"
#include "test_util.h"

namespace rsrt {
namespace {

using testing::ToneBurst;

void ExpectSilentOutside(const TriggerResult& r) {
  const auto& s = r.clip.samples;
  const std::size_t a = r.report.placed_start;
  const std::size_t b = a + r.report.placed_length;
  for (std::size_t i = 0; i < a; ++i) ASSERT_EQ(s[i], 0.0f) << i;
  for (std::size_t i = b; i < s.size(); ++i) ASSERT_EQ(s[i], 0.0f) << i;
}

std::vector<TriggerSpec> Modes() {
  return {TriggerSpec::MakeSqueeze(2, 0.6), TriggerSpec::MakeSqueeze(3, 0.6),
          TriggerSpec::MakeStretch(0.5, 1, 3), TriggerSpec::MakeStretch(1.0, 1, 3)};
}

TEST(TriggerTest, PreservesDurationAndPadsWithZeros) {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t len = 2500 + gen() % 4000;
    const std::size_t start = 500 + gen() % (16000 - len - 1000);
    const AudioClip clip = ToneBurst(start, len, 120.0 + gen() % 200);
    for (const auto& spec : Modes()) {
      const TriggerResult r = ApplyTrigger(clip, spec);
      EXPECT_FALSE(r.report.overflowed);
      ASSERT_EQ(r.clip.size(), 16000u);
      EXPECT_EQ(r.report.output_samples, 16000u);
      EXPECT_EQ(r.report.input_frames, 63u);
      EXPECT_EQ(r.report.placed_length, (r.report.transformed_active_frames - 1) * 256);
      ExpectSilentOutside(r);

      const std::size_t active = r.report.active_region.length();
      if (spec.mode == TriggerMode::kStretch) {
        EXPECT_EQ(r.report.transformed_active_frames,
                  active + static_cast<std::size_t>(std::floor(spec.stretch->gamma * active)));
      } else {
        EXPECT_EQ(r.report.transformed_active_frames, ExpectedLength(active, *spec.squeeze));
      }

      // Leading silence keeps the original lead:trail proportion.
      const double lead = static_cast<double>(r.report.active_region.start);
      const double trail = 62.0 - static_cast<double>(r.report.active_region.end);
      const double spare = 16000.0 - static_cast<double>(r.report.placed_length);
      const double want = lead + trail == 0 ? std::floor(spare / 2)
                                            : std::floor(spare * lead / (lead + trail) + 0.5);
      EXPECT_EQ(static_cast<double>(r.report.placed_start), want);
    }
  }
}

TEST(TriggerTest, PoisonedSpeechStaysInsidePlacedRegion) {
  const AudioClip clip = ToneBurst(4000, 5000, 180.0);
  for (const auto& spec : Modes()) {
    const TriggerResult r = ApplyTrigger(clip, spec);
    const MelSpectrogram again = MelAnalyze(r.clip);
    const FrameRegion region = *DetectActiveRegion(again).region;
    const auto first = static_cast<long>(r.report.placed_start / 256);
    const auto last =
        static_cast<long>((r.report.placed_start + r.report.placed_length - 1) / 256);
    EXPECT_GE(static_cast<long>(region.start), first - 2);
    EXPECT_LE(static_cast<long>(region.end), last + 2);
  }
}

TEST(TriggerTest, FullyVoicedStretchOverflows) {
  const AudioClip clip = testing::Sine(300.0, 0.5, 16000);
  TriggerSpec spec = TriggerSpec::MakeStretch(1.0, 1, 0);
  try {
    ApplyTrigger(clip, spec);
    FAIL() << "expected overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kOverflow);
  }
  spec.overflow_policy = OverflowPolicy::kEmitLong;
  spec.gl_iterations = 4;
  const TriggerResult r = ApplyTrigger(clip, spec);
  EXPECT_TRUE(r.report.overflowed);
  EXPECT_EQ(r.report.transformed_active_frames, 126u);
  EXPECT_EQ(r.clip.size(), 125u * 256u);

  // Squeeze can never overflow, even when the whole clip is voiced.
  const TriggerResult sq = ApplyTrigger(clip, TriggerSpec::MakeSqueeze(2, 0.6));
  EXPECT_EQ(sq.clip.size(), 16000u);
  EXPECT_FALSE(sq.report.overflowed);
}

TEST(TriggerTest, SpecValidation) {
  TriggerSpec spec = TriggerSpec::MakeSqueeze(2, 0.6);
  spec.stretch = StretchParams{};
  EXPECT_THROW(spec.Validate(), Error);
  spec = TriggerSpec::MakeStretch(0.5, 1);
  spec.mu = 1.0;
  EXPECT_THROW(spec.Validate(), Error);
  spec = TriggerSpec::MakeStretch(0.5, 1);
  spec.gl_iterations = 0;
  EXPECT_THROW(spec.Validate(), Error);
  EXPECT_THROW(TriggerSpec::MakeStretch(1.2, 1).Validate(), Error);
}

TEST(TriggerTest, DescriptionIsCanonical) {
  EXPECT_EQ(DescribeTrigger(TriggerSpec::MakeSqueeze(2, 0.6)),
            "mode=squeeze;phi=2;w=0.6;mu=0.85;gl_iters=60;overflow=error");
  EXPECT_EQ(DescribeTrigger(TriggerSpec::MakeStretch(1.0, 1)),
            "mode=stretch;gamma=1;sigma=1;mu=0.85;gl_iters=60;overflow=error");
}

std::vector<BatchItem> MakeBatch(std::size_t n) {
  std::vector<BatchItem> items;
  std::mt19937 gen(9);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t len = 2000 + gen() % 3000;
    items.push_back({"clip_" + std::to_string(i),
                     ToneBurst(1000 + gen() % 8000, len, 100.0 + gen() % 250)});
  }
  // A fully voiced clip overflows under the stretch trigger.
  items.push_back({"loud", testing::Sine(250.0, 0.5, 16000)});
  return items;
}

TEST(TriggerBatchTest, DeterministicAcrossRunsAndThreads) {
  const auto items = MakeBatch(12);
  TriggerSpec spec = TriggerSpec::MakeStretch(0.5, 1);
  spec.gl_iterations = 16;
  const auto a = TriggerBatch(items, spec, 77, 1);
  const auto b = TriggerBatch(items, spec, 77, 1);
  const auto c = TriggerBatch(items, spec, 77, 8);
  ASSERT_EQ(a.size(), items.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, items[i].id);
    EXPECT_EQ(a[i].item_seed, DeriveSeed(77, items[i].id));
    for (const auto* other : {&b[i], &c[i]}) {
      EXPECT_EQ(a[i].item_seed, other->item_seed);
      ASSERT_EQ(a[i].ok(), other->ok());
      if (a[i].ok()) EXPECT_EQ(a[i].result->clip, other->result->clip);
    }
  }
  EXPECT_FALSE(a.back().ok());
  EXPECT_EQ(a.back().error_kind, ErrorKind::kOverflow);
  for (std::size_t i = 0; i + 1 < a.size(); ++i) EXPECT_TRUE(a[i].ok()) << a[i].error;

  // Item results depend on the id, not the position in the batch.
  std::vector<BatchItem> reversed(items.rbegin(), items.rend());
  const auto r = TriggerBatch(reversed, spec, 77, 3);
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    EXPECT_EQ(r[a.size() - 1 - i].result->clip, a[i].result->clip);
}

TEST(TriggerBatchTest, EmptyAndDuplicateInput) {
  EXPECT_TRUE(TriggerBatch({}, TriggerSpec::MakeSqueeze(2, 0.6), 1, 4).empty());
  std::vector<BatchItem> dup = {{"a", testing::Sine(200, 0.3, 4000)},
                                {"a", testing::Sine(300, 0.3, 4000)}};
  EXPECT_THROW(TriggerBatch(dup, TriggerSpec::MakeSqueeze(2, 0.6), 1), Error);
}

}  // namespace
}  // namespace rsrt
