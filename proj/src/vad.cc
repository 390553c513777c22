// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rsrt/vad.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsrt/error.h"

namespace rsrt {

std::vector<double> FrameEnergies(const MelSpectrogram& spec) {
  std::vector<double> energies(spec.frames());
  const auto bins = static_cast<double>(spec.bins());
  for (std::size_t t = 0; t < spec.frames(); ++t) {
    double sum = 0.0;
    for (float v : spec.frame(t)) sum += std::exp(static_cast<double>(v));
    energies[t] = sum / bins;
  }
  return energies;
}

VadResult DetectActiveRegion(const MelSpectrogram& spec, double mu) {
  if (!(mu > 0.0 && mu < 1.0))
    throw Error(ErrorKind::kInvalidArgument,
                "VAD coefficient must lie in (0, 1), got " + std::to_string(mu));
  if (spec.frames() == 0)
    throw Error(ErrorKind::kInvariantViolation, "spectrogram has no frames");

  VadResult result;
  result.mu = mu;
  result.energies = FrameEnergies(spec);
  const double peak =
      *std::max_element(result.energies.begin(), result.energies.end());
  result.threshold = mu * peak;

  const auto above = [&](double e) { return e >= result.threshold; };
  const auto first =
      std::find_if(result.energies.begin(), result.energies.end(), above);
  if (first == result.energies.end()) return result;
  const auto last =
      std::find_if(result.energies.rbegin(), result.energies.rend(), above);
  result.region = FrameRegion{
      static_cast<std::size_t>(first - result.energies.begin()),
      static_cast<std::size_t>(result.energies.rend() - last) - 1};
  return result;
}

RegionSplit SplitByRegion(const MelSpectrogram& spec, const VadResult& result) {
  if (!result.region)
    throw Error(ErrorKind::kRegionMismatch, "VAD result has no active region");
  const FrameRegion& r = *result.region;
  if (r.start > r.end || r.end >= spec.frames())
    throw Error(ErrorKind::kRegionMismatch,
                "region [" + std::to_string(r.start) + ", " +
                    std::to_string(r.end) + "] does not fit " +
                    std::to_string(spec.frames()) + " frames");
  return RegionSplit{r.start, spec.Slice(r.start, r.length()),
                     spec.frames() - 1 - r.end};
}

}  // namespace rsrt
