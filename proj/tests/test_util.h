// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// Shared fixtures for the unit and acceptance suites.

#ifndef RSRT_TESTS_TEST_UTIL_H_
#define RSRT_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "rsrt/manifest.h"
#include "rsrt/spectrogram.h"
#include "rsrt/wav.h"

namespace rsrt::testing {

inline AudioClip Sine(double freq, double amp, std::size_t n,
                      double phase = 0.0) {
  AudioClip clip;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    clip.samples[i] = static_cast<float>(
        amp * std::sin(2.0 * std::numbers::pi * freq * i / kSampleRate + phase));
  return clip;
}

struct Partial {
  double freq;
  double amp;
  double phase;
};

inline AudioClip Harmonic(const std::vector<Partial>& partials,
                          std::size_t n = kSampleRate) {
  AudioClip clip;
  clip.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = 0.0;
    for (const auto& p : partials)
      x += p.amp * std::sin(2.0 * std::numbers::pi * p.freq * i / kSampleRate + p.phase);
    clip.samples[i] = static_cast<float>(x);
  }
  return clip;
}

/// One-second utterance stand-in: a harmonic tone burst with a raised-cosine
/// envelope between `start` and `start + length` samples, silence elsewhere.
inline AudioClip ToneBurst(std::size_t start, std::size_t length, double f0,
                           double amp = 0.4, std::size_t n = kSampleRate) {
  AudioClip clip;
  clip.samples.assign(n, 0.0f);
  const std::size_t ramp = std::min<std::size_t>(160, length / 4);
  for (std::size_t i = 0; i < length && start + i < n; ++i) {
    double env = 1.0;
    if (i < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * i / ramp);
    if (length - 1 - i < ramp)
      env = 0.5 - 0.5 * std::cos(std::numbers::pi * (length - 1 - i) / ramp);
    const double t = static_cast<double>(i) / kSampleRate;
    double x = 0.0;
    for (int h = 1; h <= 3; ++h)
      x += std::sin(2.0 * std::numbers::pi * f0 * h * t) / h;
    clip.samples[start + i] = static_cast<float>(amp * env * x / 1.84);
  }
  return clip;
}

/// Spectrogram with i.i.d. uniform log-mel entries in [lo, hi]; consecutive
/// frames are distinct with probability one.
inline MelSpectrogram RandomSpectrogram(std::size_t frames, std::uint32_t seed,
                                        int bins = 8, float lo = -11.0f,
                                        float hi = 2.0f) {
  SpectrogramConfig config;
  config.mel_bins = bins;
  std::mt19937 gen(seed);
  std::uniform_real_distribution<float> dist(lo, hi);
  std::vector<float> data(frames * static_cast<std::size_t>(bins));
  for (auto& v : data) v = dist(gen);
  return MelSpectrogram(frames, config, std::move(data));
}

/// Spectrogram whose frame t has every bin at ln(energies[t]).
inline MelSpectrogram ConstantFrames(const std::vector<double>& energies,
                                     int bins = 80) {
  SpectrogramConfig config;
  config.mel_bins = bins;
  MelSpectrogram spec(energies.size(), config);
  for (std::size_t t = 0; t < energies.size(); ++t)
    for (auto& v : spec.frame(t)) v = static_cast<float>(std::log(energies[t]));
  return spec;
}

inline nlohmann::json LoadCorpusJson() {
  std::ifstream in(RSRT_TEST_DATA_DIR "/harmonic_corpus.json");
  return nlohmann::json::parse(in);
}

inline std::vector<AudioClip> HarmonicCorpus(const nlohmann::json& j) {
  std::vector<AudioClip> clips;
  const auto n = j["num_samples"].get<std::size_t>();
  for (const auto& signal : j["signals"]) {
    std::vector<Partial> partials;
    for (const auto& p : signal)
      partials.push_back({p["freq"].get<double>(), p["amp"].get<double>(),
                          p["phase"].get<double>()});
    clips.push_back(Harmonic(partials, n));
  }
  return clips;
}

/// Scoped temporary directory.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("rsrt_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFileBytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

/// Compares two directory trees file by file; returns the first difference
/// or an empty string.
inline std::string DiffTrees(const std::filesystem::path& a,
                             const std::filesystem::path& b) {
  namespace fs = std::filesystem;
  std::vector<std::string> files_a, files_b;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file()) files_a.push_back(fs::relative(e.path(), a).generic_string());
  for (const auto& e : fs::recursive_directory_iterator(b))
    if (e.is_regular_file()) files_b.push_back(fs::relative(e.path(), b).generic_string());
  std::sort(files_a.begin(), files_a.end());
  std::sort(files_b.begin(), files_b.end());
  if (files_a != files_b) return "file lists differ";
  for (const auto& f : files_a)
    if (ReadFileBytes(a / f) != ReadFileBytes(b / f)) return "content differs: " + f;
  return "";
}

/// Synthetic keyword dataset: `per_class` one-second tone bursts for each
/// label, written under `root/<label>/<label>_<k>.wav`. Bursts are placed
/// and sized so that a 2x stretch still fits in one second.
inline Manifest WriteSyntheticDataset(const std::filesystem::path& root,
                                      const std::vector<std::string>& labels,
                                      std::size_t per_class, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::uniform_int_distribution<std::size_t> length(3000, 6500);
  std::uniform_real_distribution<double> f0(110.0, 320.0);
  Manifest entries;
  for (const auto& label : labels) {
    std::filesystem::create_directories(root / label);
    for (std::size_t k = 0; k < per_class; ++k) {
      const std::size_t len = length(gen);
      std::uniform_int_distribution<std::size_t> start(800, kSampleRate - len - 800);
      const AudioClip clip = ToneBurst(start(gen), len, f0(gen));
      const std::string rel = label + "/" + label + "_" + std::to_string(k) + ".wav";
      WriteWav(clip, root / rel, WavEncoding::kPcm16);
      ManifestEntry e;
      e.path = rel;
      e.label = label;
      entries.push_back(e);
    }
  }
  return entries;
}

inline const std::vector<std::string>& KeywordLabels() {
  static const std::vector<std::string> labels = {
      "yes", "no", "up", "down", "left", "right", "on", "off", "stop", "go"};
  return labels;
}

}  // namespace rsrt::testing

#endif  // RSRT_TESTS_TEST_UTIL_H_
