// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RSRT_SPECTROGRAM_H_
#define RSRT_SPECTROGRAM_H_

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "rsrt/wav.h"

namespace rsrt {

/// Framing and filterbank parameters shared by analysis and inversion.
/// The defaults are the 1024/256/1024/80 setup used for 16 kHz speech.
struct SpectrogramConfig {
  int fft_size = 1024;
  int win_length = 1024;
  int hop_length = 256;
  int mel_bins = 80;
  int sample_rate = kSampleRate;
  double fmin = 0.0;
  double fmax = 8000.0;
  double log_floor = 1e-5;

  /// Throws InvariantViolation when the parameters are inconsistent.
  void Validate() const;

  int num_fft_bins() const { return fft_size / 2 + 1; }
  /// Natural log of log_floor, rounded to the stored float precision.
  float log_floor_value() const;

  bool operator==(const SpectrogramConfig&) const = default;
};

/// T x D matrix of natural-log mel magnitudes, stored frame-major.
class MelSpectrogram {
 public:
  /// All entries start at the log floor.
  MelSpectrogram(std::size_t frames, const SpectrogramConfig& config);
  MelSpectrogram(std::size_t frames, const SpectrogramConfig& config,
                 std::vector<float> data);

  std::size_t frames() const { return frames_; }
  std::size_t bins() const { return static_cast<std::size_t>(config_.mel_bins); }
  const SpectrogramConfig& config() const { return config_; }

  std::span<float> frame(std::size_t t) {
    return {data_.data() + t * bins(), bins()};
  }
  std::span<const float> frame(std::size_t t) const {
    return {data_.data() + t * bins(), bins()};
  }
  float at(std::size_t t, std::size_t j) const { return data_[t * bins() + j]; }
  float& at(std::size_t t, std::size_t j) { return data_[t * bins() + j]; }

  const std::vector<float>& data() const { return data_; }

  /// Copy of frames [start, start + count).
  MelSpectrogram Slice(std::size_t start, std::size_t count) const;

  /// Throws InvariantViolation on non-finite entries, entries below the log
  /// floor, or an empty frame axis.
  void Validate() const;

  bool operator==(const MelSpectrogram&) const = default;

 private:
  std::size_t frames_;
  SpectrogramConfig config_;
  std::vector<float> data_;
};

// Slaney mel scale: linear below 1 kHz, logarithmic above.
double HzToMel(double hz);
double MelToHz(double mel);

/// Area-normalised triangular filters (mel_bins x num_fft_bins, row-major)
/// together with the regularised pseudo-inverse used for inversion.
class MelFilterbank {
 public:
  explicit MelFilterbank(const SpectrogramConfig& config);

  /// Shared instance for a config; built once and then read-only.
  static std::shared_ptr<const MelFilterbank> For(const SpectrogramConfig& config);

  int mel_bins() const { return mel_bins_; }
  int fft_bins() const { return fft_bins_; }
  double weight(int mel, int bin) const { return weights_[mel * fft_bins_ + bin]; }
  /// Center frequency (Hz) of each filter.
  const std::vector<double>& center_hz() const { return center_hz_; }

  /// mel[m] = sum_k weight(m, k) * magnitude[k]
  void Apply(std::span<const double> magnitude, std::span<double> mel) const;
  /// Tikhonov-regularised least-squares estimate of the linear magnitude,
  /// negatives clamped to zero.
  void ApplyInverse(std::span<const double> mel, std::span<double> magnitude) const;

 private:
  int mel_bins_;
  int fft_bins_;
  std::vector<double> weights_;
  std::vector<double> pinv_;  // fft_bins x mel_bins, row-major
  std::vector<double> center_hz_;
};

inline constexpr double kPinvRegularization = 1e-8;
inline constexpr int kDefaultGriffinLimIterations = 60;

/// Centered STFT (reflection padding), Hann window, magnitude, mel filterbank,
/// floor clamp and natural log. Produces 1 + n / hop_length frames.
MelSpectrogram MelAnalyze(const AudioClip& clip,
                          const SpectrogramConfig& config = {});

/// Deterministic Griffin-Lim reconstruction (zero initial phase) of a log-mel
/// spectrogram. Returns exactly (T - 1) * hop_length samples clamped to
/// [-1, 1]; a single-frame spectrogram yields an empty clip.
AudioClip MelInvert(const MelSpectrogram& spec,
                    int iterations = kDefaultGriffinLimIterations);

/// Mean absolute log-mel difference over the first min(T_a, T_b) frames.
double LogSpectralDistance(const MelSpectrogram& a, const MelSpectrogram& b);

/// MEL0 container: "MEL0", u32 T, u32 D, u32 sample_rate, u32 hop_length,
/// then T*D little-endian float32 values, frame-major.
std::vector<std::uint8_t> EncodeMelFile(const MelSpectrogram& spec);
MelSpectrogram DecodeMelFile(std::span<const std::uint8_t> bytes);
void WriteMelFile(const MelSpectrogram& spec, const std::filesystem::path& path);
MelSpectrogram ReadMelFile(const std::filesystem::path& path);

}  // namespace rsrt

#endif  // RSRT_SPECTROGRAM_H_
