// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RSRT_WAV_H_
#define RSRT_WAV_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace rsrt {

inline constexpr int kSampleRate = 16000;

// Tolerance on |sample| accepted before the final clamp of an inverted signal.
inline constexpr float kSampleLimit = 1.000001f;

/// Mono PCM signal with amplitudes nominally in [-1, 1].
struct AudioClip {
  std::vector<float> samples;
  int sample_rate = kSampleRate;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_seconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }

  bool operator==(const AudioClip&) const = default;
};

/// Throws InvariantViolation if a sample is non-finite or outside
/// [-kSampleLimit, kSampleLimit], or if the sample rate is not positive.
void ValidateClip(const AudioClip& clip);

enum class WavEncoding { kPcm16, kFloat32 };

/// Reads a RIFF/WAVE file holding mono 16 kHz PCM16 or IEEE float32 audio.
/// PCM16 values are divided by 32768.
AudioClip ReadWav(const std::filesystem::path& path);

/// Parses an in-memory WAV image. Used by ReadWav and by tests.
AudioClip DecodeWav(std::span<const std::uint8_t> bytes);

void WriteWav(const AudioClip& clip, const std::filesystem::path& path,
              WavEncoding encoding = WavEncoding::kFloat32);

std::vector<std::uint8_t> EncodeWav(const AudioClip& clip,
                                    WavEncoding encoding);

}  // namespace rsrt

#endif  // RSRT_WAV_H_
