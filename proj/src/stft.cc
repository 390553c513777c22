// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "stft.h"

#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>

namespace rsrt::internal {
namespace {

// The FFTW planner is not re-entrant.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

// numpy-style "reflect" indexing (edge sample not repeated).
std::size_t ReflectIndex(std::ptrdiff_t i, std::size_t n) {
  if (n == 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<std::ptrdiff_t>(n)) m = period - m;
  return static_cast<std::size_t>(m);
}

}  // namespace

StftEngine::StftEngine(const SpectrogramConfig& config)
    : fft_size_(config.fft_size),
      hop_(config.hop_length),
      fft_bins_(config.num_fft_bins()),
      window_(static_cast<std::size_t>(config.fft_size), 0.0) {
  // Periodic Hann.
  const int offset = (config.fft_size - config.win_length) / 2;
  for (int n = 0; n < config.win_length; ++n) {
    window_[static_cast<std::size_t>(offset + n)] =
        0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / config.win_length);
  }
  std::lock_guard lock(PlannerMutex());
  real_buf_ = fftw_alloc_real(static_cast<std::size_t>(fft_size_));
  complex_buf_ = fftw_alloc_complex(static_cast<std::size_t>(fft_bins_));
  forward_plan_ = fftw_plan_dft_r2c_1d(fft_size_, real_buf_, complex_buf_,
                                       FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_1d(fft_size_, complex_buf_, real_buf_,
                                       FFTW_ESTIMATE);
}

StftEngine::~StftEngine() {
  std::lock_guard lock(PlannerMutex());
  fftw_destroy_plan(forward_plan_);
  fftw_destroy_plan(inverse_plan_);
  fftw_free(real_buf_);
  fftw_free(complex_buf_);
}

std::vector<std::complex<double>> StftEngine::Forward(
    std::span<const double> signal) {
  const std::size_t n = signal.size();
  const std::size_t frames = NumFrames(n, hop_);
  const auto pad = static_cast<std::ptrdiff_t>(fft_size_ / 2);
  std::vector<std::complex<double>> out(frames * static_cast<std::size_t>(fft_bins_));
  for (std::size_t t = 0; t < frames; ++t) {
    const auto start = static_cast<std::ptrdiff_t>(t) * hop_ - pad;
    for (int k = 0; k < fft_size_; ++k) {
      const double x = signal[ReflectIndex(start + k, n)];
      real_buf_[k] = x * window_[static_cast<std::size_t>(k)];
    }
    fftw_execute(forward_plan_);
    auto* row = out.data() + t * static_cast<std::size_t>(fft_bins_);
    for (int k = 0; k < fft_bins_; ++k)
      row[k] = {complex_buf_[k][0], complex_buf_[k][1]};
  }
  return out;
}

std::vector<double> StftEngine::Inverse(
    std::span<const std::complex<double>> spectrum, std::size_t frames) {
  if (frames <= 1) return {};
  const auto fft = static_cast<std::size_t>(fft_size_);
  const auto hop = static_cast<std::size_t>(hop_);
  const std::size_t padded = fft + hop * (frames - 1);
  std::vector<double> acc(padded, 0.0);
  std::vector<double> norm(padded, 0.0);
  const double scale = 1.0 / fft_size_;
  for (std::size_t t = 0; t < frames; ++t) {
    const auto* row = spectrum.data() + t * static_cast<std::size_t>(fft_bins_);
    for (int k = 0; k < fft_bins_; ++k) {
      complex_buf_[k][0] = row[k].real();
      complex_buf_[k][1] = row[k].imag();
    }
    fftw_execute(inverse_plan_);
    const std::size_t base = t * hop;
    for (std::size_t k = 0; k < fft; ++k) {
      acc[base + k] += real_buf_[k] * scale * window_[k];
      norm[base + k] += window_[k] * window_[k];
    }
  }
  const std::size_t pad = fft / 2;
  const std::size_t length = hop * (frames - 1);
  std::vector<double> out(length);
  constexpr double kTiny = std::numeric_limits<float>::min();
  for (std::size_t i = 0; i < length; ++i) {
    const double w = norm[pad + i];
    out[i] = w > kTiny ? acc[pad + i] / w : acc[pad + i];
  }
  return out;
}

}  // namespace rsrt::internal
