// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rsrt/rhythm.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsrt/error.h"
#include "rsrt/rng.h"

namespace rsrt {

void StretchParams::Validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw Error(ErrorKind::kInvalidArgument,
                "gamma must lie in [0, 1], got " + std::to_string(gamma));
  if (sigma < 1)
    throw Error(ErrorKind::kInvalidArgument,
                "sigma must be >= 1, got " + std::to_string(sigma));
}

void SqueezeParams::Validate() const {
  if (phi < 2)
    throw Error(ErrorKind::kInvalidArgument,
                "phi must be >= 2, got " + std::to_string(phi));
  if (!(w >= 0.0 && w <= 1.0))
    throw Error(ErrorKind::kInvalidArgument,
                "w must lie in [0, 1], got " + std::to_string(w));
}

std::size_t StretchSelectionCount(std::size_t frames,
                                  const StretchParams& params) {
  return static_cast<std::size_t>(
      std::floor(params.gamma * static_cast<double>(frames)));
}

std::vector<std::size_t> StretchSelection(std::size_t frames,
                                          const StretchParams& params) {
  params.Validate();
  CounterRng rng(params.seed);
  auto picked =
      SampleWithoutReplacement(frames, StretchSelectionCount(frames, params), rng);
  std::sort(picked.begin(), picked.end());
  return picked;
}

MelSpectrogram Stretch(const MelSpectrogram& spec, const StretchParams& params) {
  const auto selected = StretchSelection(spec.frames(), params);
  std::vector<bool> repeat(spec.frames(), false);
  for (std::size_t i : selected) repeat[i] = true;

  const std::size_t out_frames = ExpectedLength(spec.frames(), params);
  std::vector<float> data;
  data.reserve(out_frames * spec.bins());
  for (std::size_t t = 0; t < spec.frames(); ++t) {
    const auto f = spec.frame(t);
    const int copies = repeat[t] ? 1 + params.sigma : 1;
    for (int c = 0; c < copies; ++c) data.insert(data.end(), f.begin(), f.end());
  }
  return MelSpectrogram(out_frames, spec.config(), std::move(data));
}

MelSpectrogram Squeeze(const MelSpectrogram& spec, const SqueezeParams& params) {
  params.Validate();
  const std::size_t frames = spec.frames();
  const auto phi = static_cast<std::size_t>(params.phi);
  const double keep = 1.0 - params.w;
  std::vector<float> data;
  data.reserve(ExpectedLength(frames, params) * spec.bins());
  std::size_t out_frames = 0;
  for (std::size_t t = 0; t < frames; ++t) {
    const bool merge = t % phi == 0 && t + 1 < frames;
    const auto f = spec.frame(t);
    if (merge) {
      const auto next = spec.frame(t + 1);
      for (std::size_t j = 0; j < f.size(); ++j)
        data.push_back(static_cast<float>(keep * f[j] + params.w * next[j]));
      ++t;  // successor consumed
    } else {
      data.insert(data.end(), f.begin(), f.end());
    }
    ++out_frames;
  }
  return MelSpectrogram(out_frames, spec.config(), std::move(data));
}

std::size_t ExpectedLength(std::size_t frames, const StretchParams& params) {
  return frames + StretchSelectionCount(frames, params) *
                      static_cast<std::size_t>(params.sigma);
}

std::size_t ExpectedLength(std::size_t frames, const SqueezeParams& params) {
  // merge positions d = k * phi with d + 1 <= frames - 1
  if (frames < 2) return frames;
  const auto phi = static_cast<std::size_t>(params.phi);
  const std::size_t merges = (frames - 2) / phi + 1;
  return frames - merges;
}

}  // namespace rsrt
