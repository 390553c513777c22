// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RSRT_SRC_STFT_H_
#define RSRT_SRC_STFT_H_

#include <complex>
#include <span>
#include <vector>

#include <fftw3.h>

#include "rsrt/spectrogram.h"

namespace rsrt::internal {

// Centered short-time Fourier transform with its least-squares inverse.
// Owns FFTW plans and scratch buffers, so one instance must not be shared
// between threads; create one per call site instead.
class StftEngine {
 public:
  explicit StftEngine(const SpectrogramConfig& config);
  ~StftEngine();
  StftEngine(const StftEngine&) = delete;
  StftEngine& operator=(const StftEngine&) = delete;

  int fft_bins() const { return fft_bins_; }
  static std::size_t NumFrames(std::size_t num_samples, int hop_length) {
    return 1 + num_samples / static_cast<std::size_t>(hop_length);
  }

  // Frame-major complex spectrum, NumFrames(signal.size()) x fft_bins().
  std::vector<std::complex<double>> Forward(std::span<const double> signal);

  // Overlap-add inverse with squared-window normalisation. The result has
  // (frames - 1) * hop_length samples.
  std::vector<double> Inverse(std::span<const std::complex<double>> spectrum,
                              std::size_t frames);

 private:
  int fft_size_;
  int hop_;
  int fft_bins_;
  std::vector<double> window_;  // Hann of win_length, centered in fft_size
  double* real_buf_;
  fftw_complex* complex_buf_;
  fftw_plan forward_plan_;
  fftw_plan inverse_plan_;
};

}  // namespace rsrt::internal

#endif  // RSRT_SRC_STFT_H_
