// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rsrt/error.h"
#include "rsrt/wav.h"
#include "test_util.h"

namespace rsrt {
namespace {

// Hand-built RIFF image so the reader is checked against bytes it did not
// produce itself.
std::vector<std::uint8_t> RawWav(std::uint16_t format, std::uint16_t channels,
                                 std::uint32_t rate, std::uint16_t bits,
                                 const std::vector<std::uint8_t>& payload) {
  std::vector<std::uint8_t> b;
  auto u16 = [&](std::uint16_t v) { b.push_back(v & 0xFF); b.push_back(v >> 8); };
  auto u32 = [&](std::uint32_t v) { for (int s = 0; s < 32; s += 8) b.push_back((v >> s) & 0xFF); };
  auto tag = [&](const char* t) { b.insert(b.end(), t, t + 4); };
  tag("RIFF");
  u32(static_cast<std::uint32_t>(36 + 10 + payload.size()));
  tag("WAVE");
  tag("LIST");  // unrelated chunk the reader must skip
  u32(2);
  u16(0);
  tag("fmt ");
  u32(16);
  u16(format);
  u16(channels);
  u32(rate);
  u32(rate * channels * bits / 8);
  u16(static_cast<std::uint16_t>(channels * bits / 8));
  u16(bits);
  tag("data");
  u32(static_cast<std::uint32_t>(payload.size()));
  b.insert(b.end(), payload.begin(), payload.end());
  return b;
}

TEST(WavTest, ZerosDecodeToSilence) {
  const std::vector<std::uint8_t> payload(2 * 16000, 0);
  const AudioClip clip = DecodeWav(RawWav(1, 1, 16000, 16, payload));
  ASSERT_EQ(clip.size(), 16000u);
  EXPECT_EQ(clip.sample_rate, 16000);
  for (float s : clip.samples) EXPECT_EQ(s, 0.0f);
}

TEST(WavTest, Pcm16UsesDivisor32768) {
  // 16384 = 0x4000, -32768 = 0x8000
  const AudioClip half = DecodeWav(RawWav(1, 1, 16000, 16, {0x00, 0x40}));
  ASSERT_EQ(half.size(), 1u);
  EXPECT_EQ(half.samples[0], 0.5f);
  const AudioClip min = DecodeWav(RawWav(1, 1, 16000, 16, {0x00, 0x80}));
  EXPECT_EQ(min.samples[0], -1.0f);
}

TEST(WavTest, RejectsStereo) {
  try {
    DecodeWav(RawWav(1, 2, 16000, 16, {0, 0, 0, 0}));
    FAIL() << "stereo accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedFormat);
  }
}

TEST(WavTest, RejectsOtherEncodingsAndRates) {
  try {
    DecodeWav(RawWav(1, 1, 16000, 24, {0, 0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedFormat);
  }
  try {
    DecodeWav(RawWav(1, 1, 8000, 16, {0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSampleRateMismatch);
  }
  try {
    DecodeWav(std::vector<std::uint8_t>{'R', 'I', 'F', 'F'});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedFormat);
  }
}

TEST(WavTest, MissingFileIsIoError) {
  try {
    ReadWav("/nonexistent/rsrt/file.wav");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

TEST(WavTest, Float32RoundTripIsExactForRandomClips) {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<std::size_t> len(0, 4000);
    std::uniform_real_distribution<float> amp(-1.0f, 1.0f);
    AudioClip clip;
    clip.samples.resize(len(gen));
    for (auto& s : clip.samples) s = amp(gen);
    EXPECT_EQ(DecodeWav(EncodeWav(clip, WavEncoding::kFloat32)), clip);
  }
}

TEST(WavTest, Pcm16RoundTripWithinOneLsb) {
  testing::TempDir dir("wav");
  AudioClip clip;
  clip.samples = {0.5f, -0.25f, 1.0f, -1.0f, 0.3333f, 1e-6f};
  WriteWav(clip, dir / "a.wav", WavEncoding::kPcm16);
  const AudioClip back = ReadWav(dir / "a.wav");
  ASSERT_EQ(back.size(), clip.size());
  for (std::size_t i = 0; i < clip.size(); ++i)
    EXPECT_LE(std::fabs(back.samples[i] - clip.samples[i]), 1.0f / 32768.0f);
  EXPECT_EQ(back.samples[0], 0.5f);
  EXPECT_EQ(back.samples[1], -0.25f);

  std::mt19937 gen(11);
  std::uniform_real_distribution<float> amp(-1.0f, 1.0f);
  clip.samples.resize(5000);
  for (auto& s : clip.samples) s = amp(gen);
  const AudioClip round = DecodeWav(EncodeWav(clip, WavEncoding::kPcm16));
  for (std::size_t i = 0; i < clip.size(); ++i)
    ASSERT_LE(std::fabs(round.samples[i] - clip.samples[i]), std::ldexp(1.0f, -15));
}

TEST(WavTest, WriteRejectsNanAndOutOfRange) {
  AudioClip clip;
  clip.samples = {0.0f, std::numeric_limits<float>::quiet_NaN()};
  try {
    EncodeWav(clip, WavEncoding::kFloat32);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvariantViolation);
  }
  clip.samples = {1.01f};
  EXPECT_THROW(EncodeWav(clip, WavEncoding::kPcm16), Error);
  clip.samples = {1.0000005f};  // inside the inversion tolerance
  EXPECT_NO_THROW(EncodeWav(clip, WavEncoding::kFloat32));
}

}  // namespace
}  // namespace rsrt
