// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RSRT_TRIGGER_H_
#define RSRT_TRIGGER_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rsrt/error.h"
#include "rsrt/rhythm.h"
#include "rsrt/spectrogram.h"
#include "rsrt/vad.h"
#include "rsrt/wav.h"

namespace rsrt {

enum class TriggerMode { kStretch, kSqueeze };
enum class OverflowPolicy { kError, kEmitLong };

struct TriggerSpec {
  TriggerMode mode = TriggerMode::kSqueeze;
  std::optional<StretchParams> stretch;
  std::optional<SqueezeParams> squeeze;
  double mu = kDefaultVadCoefficient;
  int gl_iterations = kDefaultGriffinLimIterations;
  OverflowPolicy overflow_policy = OverflowPolicy::kError;
  SpectrogramConfig spectrogram;

  static TriggerSpec MakeStretch(double gamma, int sigma, std::uint64_t seed = 0);
  static TriggerSpec MakeSqueeze(int phi, double w);

  /// Exactly one parameter block, matching `mode`, and all values in range.
  void Validate() const;
};

/// Canonical single-line encoding, e.g.
/// "mode=stretch;gamma=1;sigma=1;mu=0.85;gl_iters=60;overflow=error".
/// The stretch seed is not part of it; it is recorded per item.
std::string DescribeTrigger(const TriggerSpec& spec);

struct TriggerReport {
  std::size_t input_frames = 0;
  FrameRegion active_region;
  std::size_t transformed_active_frames = 0;
  std::size_t output_samples = 0;
  bool overflowed = false;
  // Where the reconstructed speech sits inside the output, in samples.
  std::size_t placed_start = 0;
  std::size_t placed_length = 0;
};

struct TriggerResult {
  AudioClip clip;
  TriggerReport report;
};

/// Detects the active region, stretches or squeezes it, reconstructs audio
/// and pads with digital silence back to the input length. Leading and
/// trailing silence are split in proportion to the original leading and
/// trailing frame counts. Throws OverflowError when the transformed speech is
/// longer than the input and the policy is kError.
TriggerResult ApplyTrigger(const AudioClip& clip, const TriggerSpec& spec);

struct BatchItem {
  std::string id;
  AudioClip clip;
};

struct BatchOutcome {
  std::string id;
  std::uint64_t item_seed = 0;
  std::optional<TriggerResult> result;
  std::optional<ErrorKind> error_kind;
  std::string error;

  bool ok() const { return result.has_value(); }
};

/// Per-item stretch seed: DeriveSeed(master_seed, id). Results are in input
/// order and independent of `threads`. Item failures are recorded in the
/// outcome rather than thrown.
std::vector<BatchOutcome> TriggerBatch(const std::vector<BatchItem>& items,
                                       const TriggerSpec& spec,
                                       std::uint64_t master_seed,
                                       int threads = 1);

/// Spec with the stretch seed replaced by the item's derived seed.
TriggerSpec SpecForItem(const TriggerSpec& spec, std::uint64_t item_seed);

}  // namespace rsrt

#endif  // RSRT_TRIGGER_H_
