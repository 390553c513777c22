// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RSRT_RHYTHM_H_
#define RSRT_RHYTHM_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rsrt/spectrogram.h"

namespace rsrt {

/// Frame duplication: a `gamma` fraction of frames, chosen at random, is
/// repeated `sigma` extra times in place.
struct StretchParams {
  double gamma = 1.0;
  int sigma = 1;
  std::uint64_t seed = 0;

  void Validate() const;
  bool operator==(const StretchParams&) const = default;
};

/// Frame merging: every `phi`-th frame (starting with the first) is blended
/// with its successor as (1 - w) * f_d + w * f_{d+1}, and the successor is
/// dropped.
struct SqueezeParams {
  int phi = 2;
  double w = 0.6;

  void Validate() const;
  bool operator==(const SqueezeParams&) const = default;
};

/// floor(gamma * T); the number of frames a stretch duplicates.
std::size_t StretchSelectionCount(std::size_t frames, const StretchParams& params);

/// Sorted frame indices that Stretch duplicates for these params.
std::vector<std::size_t> StretchSelection(std::size_t frames,
                                          const StretchParams& params);

MelSpectrogram Stretch(const MelSpectrogram& spec, const StretchParams& params);
MelSpectrogram Squeeze(const MelSpectrogram& spec, const SqueezeParams& params);

/// T + floor(gamma * T) * sigma
std::size_t ExpectedLength(std::size_t frames, const StretchParams& params);
/// T minus the number of merge positions 0, phi, 2*phi, ... that have a
/// successor frame.
std::size_t ExpectedLength(std::size_t frames, const SqueezeParams& params);

}  // namespace rsrt

#endif  // RSRT_RHYTHM_H_
