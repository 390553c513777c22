// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rsrt/spectrogram.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <fstream>
#include <iterator>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include <Eigen/Dense>

#include "rsrt/error.h"
#include "stft.h"

namespace rsrt {
namespace {

constexpr double kMinLogHz = 1000.0;
constexpr double kLinearHzPerMel = 200.0 / 3.0;
constexpr double kMinLogMel = kMinLogHz / kLinearHzPerMel;  // 15
const double kLogStep = std::log(6.4) / 27.0;

void Require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::kInvariantViolation, what);
}

}  // namespace

void SpectrogramConfig::Validate() const {
  Require(hop_length > 0, "hop_length must be positive");
  Require(hop_length <= win_length && win_length <= fft_size,
          "need hop_length <= win_length <= fft_size");
  Require(fft_size % 2 == 0, "fft_size must be even");
  Require(sample_rate > 0, "sample_rate must be positive");
  Require(0.0 <= fmin && fmin < fmax && fmax <= sample_rate / 2.0,
          "need 0 <= fmin < fmax <= sample_rate / 2");
  Require(mel_bins >= 1, "mel_bins must be >= 1");
  Require(log_floor > 0.0, "log_floor must be positive");
}

float SpectrogramConfig::log_floor_value() const {
  return static_cast<float>(std::log(log_floor));
}

MelSpectrogram::MelSpectrogram(std::size_t frames,
                               const SpectrogramConfig& config)
    : frames_(frames),
      config_(config),
      data_(frames * static_cast<std::size_t>(config.mel_bins),
            config.log_floor_value()) {}

MelSpectrogram::MelSpectrogram(std::size_t frames,
                               const SpectrogramConfig& config,
                               std::vector<float> data)
    : frames_(frames), config_(config), data_(std::move(data)) {
  if (data_.size() != frames_ * bins())
    throw Error(ErrorKind::kDimensionMismatch,
                "data holds " + std::to_string(data_.size()) +
                    " values, expected " + std::to_string(frames_ * bins()));
}

MelSpectrogram MelSpectrogram::Slice(std::size_t start,
                                     std::size_t count) const {
  if (start + count > frames_)
    throw Error(ErrorKind::kRegionMismatch, "slice past end of spectrogram");
  const auto first = data_.begin() + static_cast<std::ptrdiff_t>(start * bins());
  return MelSpectrogram(
      count, config_,
      std::vector<float>(first, first + static_cast<std::ptrdiff_t>(count * bins())));
}

void MelSpectrogram::Validate() const {
  config_.Validate();
  Require(frames_ >= 1, "spectrogram has no frames");
  const float floor = config_.log_floor_value();
  for (float v : data_) {
    Require(std::isfinite(v), "non-finite spectrogram entry");
    Require(v >= floor, "spectrogram entry below log floor");
  }
}

double HzToMel(double hz) {
  if (hz < kMinLogHz) return hz / kLinearHzPerMel;
  return kMinLogMel + std::log(hz / kMinLogHz) / kLogStep;
}

double MelToHz(double mel) {
  if (mel < kMinLogMel) return mel * kLinearHzPerMel;
  return kMinLogHz * std::exp(kLogStep * (mel - kMinLogMel));
}

MelFilterbank::MelFilterbank(const SpectrogramConfig& config)
    : mel_bins_(config.mel_bins), fft_bins_(config.num_fft_bins()) {
  config.Validate();
  const int points = mel_bins_ + 2;
  const double mel_lo = HzToMel(config.fmin);
  const double mel_hi = HzToMel(config.fmax);
  std::vector<double> edges(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    edges[i] = MelToHz(mel_lo + (mel_hi - mel_lo) * i / (points - 1));
  center_hz_.assign(edges.begin() + 1, edges.end() - 1);

  weights_.assign(static_cast<std::size_t>(mel_bins_ * fft_bins_), 0.0);
  for (int m = 0; m < mel_bins_; ++m) {
    const double lo = edges[m], mid = edges[m + 1], hi = edges[m + 2];
    const double area_norm = 2.0 / (hi - lo);
    for (int k = 0; k < fft_bins_; ++k) {
      const double hz =
          static_cast<double>(k) * config.sample_rate / config.fft_size;
      const double rising = (hz - lo) / (mid - lo);
      const double falling = (hi - hz) / (hi - mid);
      weights_[m * fft_bins_ + k] =
          std::max(0.0, std::min(rising, falling)) * area_norm;
    }
  }

  // (W^T W + lambda I)^-1 W^T == W^T (W W^T + lambda I)^-1; the right-hand
  // form only needs a mel_bins x mel_bins solve.
  using RowMatrix =
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMatrix> w(weights_.data(), mel_bins_, fft_bins_);
  Eigen::MatrixXd gram = w * w.transpose();
  gram.diagonal().array() += kPinvRegularization;
  const Eigen::MatrixXd gram_inv =
      gram.ldlt().solve(Eigen::MatrixXd::Identity(mel_bins_, mel_bins_));
  const RowMatrix pinv = w.transpose() * gram_inv;
  pinv_.assign(pinv.data(), pinv.data() + pinv.size());
}

std::shared_ptr<const MelFilterbank> MelFilterbank::For(
    const SpectrogramConfig& config) {
  using Key = std::tuple<int, int, int, double, double>;
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const MelFilterbank>> cache;
  const Key key{config.fft_size, config.mel_bins, config.sample_rate,
                config.fmin, config.fmax};
  std::lock_guard lock(mu);
  auto& slot = cache[key];
  if (!slot) slot = std::make_shared<const MelFilterbank>(config);
  return slot;
}

void MelFilterbank::Apply(std::span<const double> magnitude,
                          std::span<double> mel) const {
  for (int m = 0; m < mel_bins_; ++m) {
    const double* row = weights_.data() + m * fft_bins_;
    double sum = 0.0;
    for (int k = 0; k < fft_bins_; ++k) sum += row[k] * magnitude[k];
    mel[m] = sum;
  }
}

void MelFilterbank::ApplyInverse(std::span<const double> mel,
                                 std::span<double> magnitude) const {
  for (int k = 0; k < fft_bins_; ++k) {
    const double* row = pinv_.data() + k * mel_bins_;
    double sum = 0.0;
    for (int m = 0; m < mel_bins_; ++m) sum += row[m] * mel[m];
    magnitude[k] = std::max(0.0, sum);
  }
}

MelSpectrogram MelAnalyze(const AudioClip& clip,
                          const SpectrogramConfig& config) {
  config.Validate();
  if (clip.sample_rate != config.sample_rate)
    throw Error(ErrorKind::kConfigMismatch,
                "clip is " + std::to_string(clip.sample_rate) +
                    " Hz, config expects " + std::to_string(config.sample_rate));
  if (clip.empty()) throw Error(ErrorKind::kEmptySignal, "clip has no samples");

  const auto filterbank = MelFilterbank::For(config);
  internal::StftEngine stft(config);
  const std::vector<double> signal(clip.samples.begin(), clip.samples.end());
  const auto spectrum = stft.Forward(signal);
  const int bins = stft.fft_bins();
  const std::size_t frames = spectrum.size() / static_cast<std::size_t>(bins);

  MelSpectrogram out(frames, config);
  std::vector<double> magnitude(static_cast<std::size_t>(bins));
  std::vector<double> mel(static_cast<std::size_t>(config.mel_bins));
  for (std::size_t t = 0; t < frames; ++t) {
    for (int k = 0; k < bins; ++k)
      magnitude[k] = std::abs(spectrum[t * bins + k]);
    filterbank->Apply(magnitude, mel);
    auto row = out.frame(t);
    for (int m = 0; m < config.mel_bins; ++m)
      row[m] = static_cast<float>(std::log(std::max(mel[m], config.log_floor)));
  }
  return out;
}

AudioClip MelInvert(const MelSpectrogram& spec, int iterations) {
  spec.Validate();
  if (iterations < 1)
    throw Error(ErrorKind::kInvariantViolation, "iterations must be >= 1");
  const SpectrogramConfig& config = spec.config();
  AudioClip out;
  out.sample_rate = config.sample_rate;
  const std::size_t frames = spec.frames();
  if (frames < 2) return out;

  const auto filterbank = MelFilterbank::For(config);
  internal::StftEngine stft(config);
  const auto bins = static_cast<std::size_t>(stft.fft_bins());

  std::vector<double> magnitude(frames * bins);
  std::vector<double> mel(spec.bins());
  for (std::size_t t = 0; t < frames; ++t) {
    const auto row = spec.frame(t);
    for (std::size_t m = 0; m < mel.size(); ++m) mel[m] = std::exp(row[m]);
    filterbank->ApplyInverse(mel, std::span(magnitude).subspan(t * bins, bins));
  }

  // Zero initial phase: the first estimate is the magnitude itself.
  std::vector<std::complex<double>> estimate(magnitude.begin(), magnitude.end());
  std::vector<double> signal;
  for (int it = 0; it < iterations; ++it) {
    signal = stft.Inverse(estimate, frames);
    const auto rebuilt = stft.Forward(signal);
    for (std::size_t i = 0; i < estimate.size(); ++i) {
      const double r = std::abs(rebuilt[i]);
      estimate[i] = r > 0.0 ? magnitude[i] * (rebuilt[i] / r)
                            : std::complex<double>(magnitude[i], 0.0);
    }
  }
  signal = stft.Inverse(estimate, frames);

  out.samples.resize(signal.size());
  std::transform(signal.begin(), signal.end(), out.samples.begin(),
                 [](double s) { return static_cast<float>(std::clamp(s, -1.0, 1.0)); });
  return out;
}

double LogSpectralDistance(const MelSpectrogram& a, const MelSpectrogram& b) {
  if (a.bins() != b.bins())
    throw Error(ErrorKind::kDimensionMismatch,
                "mel bins differ: " + std::to_string(a.bins()) + " vs " +
                    std::to_string(b.bins()));
  const std::size_t frames = std::min(a.frames(), b.frames());
  if (frames == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t t = 0; t < frames; ++t) {
    const auto fa = a.frame(t), fb = b.frame(t);
    for (std::size_t j = 0; j < a.bins(); ++j)
      sum += std::fabs(static_cast<double>(fa[j]) - fb[j]);
  }
  return sum / static_cast<double>(frames * a.bins());
}

// --- MEL0 container ---

namespace {

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8)
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
}

std::uint32_t GetU32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

constexpr std::size_t kMelHeaderBytes = 20;

}  // namespace

std::vector<std::uint8_t> EncodeMelFile(const MelSpectrogram& spec) {
  std::vector<std::uint8_t> out;
  out.reserve(kMelHeaderBytes + spec.data().size() * 4);
  for (char c : {'M', 'E', 'L', '0'}) out.push_back(static_cast<std::uint8_t>(c));
  PutU32(out, static_cast<std::uint32_t>(spec.frames()));
  PutU32(out, static_cast<std::uint32_t>(spec.bins()));
  PutU32(out, static_cast<std::uint32_t>(spec.config().sample_rate));
  PutU32(out, static_cast<std::uint32_t>(spec.config().hop_length));
  for (float v : spec.data()) PutU32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

MelSpectrogram DecodeMelFile(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kMelHeaderBytes || bytes[0] != 'M' || bytes[1] != 'E' ||
      bytes[2] != 'L' || bytes[3] != '0')
    throw Error(ErrorKind::kUnsupportedFormat, "missing MEL0 header");
  const std::uint32_t frames = GetU32(bytes, 4);
  const std::uint32_t bins = GetU32(bytes, 8);
  SpectrogramConfig config;
  config.mel_bins = static_cast<int>(bins);
  config.sample_rate = static_cast<int>(GetU32(bytes, 12));
  config.hop_length = static_cast<int>(GetU32(bytes, 16));
  config.fmax = std::min(config.fmax, config.sample_rate / 2.0);
  const std::size_t count = static_cast<std::size_t>(frames) * bins;
  if (bytes.size() != kMelHeaderBytes + count * 4)
    throw Error(ErrorKind::kUnsupportedFormat,
                "MEL0 payload is " + std::to_string(bytes.size() - kMelHeaderBytes) +
                    " bytes, expected " + std::to_string(count * 4));
  std::vector<float> data(count);
  for (std::size_t i = 0; i < count; ++i)
    data[i] = std::bit_cast<float>(GetU32(bytes, kMelHeaderBytes + 4 * i));
  MelSpectrogram spec(frames, config, std::move(data));
  spec.Validate();
  return spec;
}

void WriteMelFile(const MelSpectrogram& spec, const std::filesystem::path& path) {
  spec.Validate();
  const auto bytes = EncodeMelFile(spec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

MelSpectrogram ReadMelFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return DecodeMelFile(bytes);
}

}  // namespace rsrt
