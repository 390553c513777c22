// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RSRT_VAD_H_
#define RSRT_VAD_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "rsrt/spectrogram.h"

namespace rsrt {

inline constexpr double kDefaultVadCoefficient = 0.85;

/// Inclusive, 0-indexed frame span.
struct FrameRegion {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start + 1; }
  bool operator==(const FrameRegion&) const = default;
};

struct VadResult {
  std::vector<double> energies;
  double threshold = 0.0;
  double mu = kDefaultVadCoefficient;
  std::optional<FrameRegion> region;
};

/// Mean of the exponentiated (linear) mel magnitudes of every frame.
std::vector<double> FrameEnergies(const MelSpectrogram& spec);

/// Thresholds frame energies at mu * max(energy). The active region spans
/// from the first to the last frame at or above the threshold, so dips
/// between syllables stay inside it.
VadResult DetectActiveRegion(const MelSpectrogram& spec,
                             double mu = kDefaultVadCoefficient);

struct RegionSplit {
  std::size_t leading = 0;
  MelSpectrogram active;
  std::size_t trailing = 0;
};

/// Cuts the spectrogram into leading frames, the active span, and trailing
/// frames. Throws RegionMismatch when the region does not fit `spec`.
RegionSplit SplitByRegion(const MelSpectrogram& spec, const VadResult& result);

}  // namespace rsrt

#endif  // RSRT_VAD_H_
