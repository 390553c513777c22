// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rsrt/trigger.h"

#include <charconv>
#include <set>

#include "rsrt/parallel.h"
#include "rsrt/rng.h"

namespace rsrt {
namespace {

std::string ShortestDecimal(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

TriggerSpec TriggerSpec::MakeStretch(double gamma, int sigma,
                                     std::uint64_t seed) {
  TriggerSpec spec;
  spec.mode = TriggerMode::kStretch;
  spec.stretch = StretchParams{gamma, sigma, seed};
  return spec;
}

TriggerSpec TriggerSpec::MakeSqueeze(int phi, double w) {
  TriggerSpec spec;
  spec.mode = TriggerMode::kSqueeze;
  spec.squeeze = SqueezeParams{phi, w};
  return spec;
}

void TriggerSpec::Validate() const {
  const bool stretching = mode == TriggerMode::kStretch;
  if (stretching != stretch.has_value() || stretching == squeeze.has_value())
    throw Error(ErrorKind::kInvalidArgument,
                "trigger needs exactly one parameter block matching its mode");
  if (stretch) stretch->Validate();
  if (squeeze) squeeze->Validate();
  if (!(mu > 0.0 && mu < 1.0))
    throw Error(ErrorKind::kInvalidArgument, "mu must lie in (0, 1)");
  if (gl_iterations < 1)
    throw Error(ErrorKind::kInvalidArgument, "gl_iterations must be >= 1");
  spectrogram.Validate();
}

std::string DescribeTrigger(const TriggerSpec& spec) {
  std::string out;
  if (spec.mode == TriggerMode::kStretch && spec.stretch) {
    out = "mode=stretch;gamma=" + ShortestDecimal(spec.stretch->gamma) +
          ";sigma=" + std::to_string(spec.stretch->sigma);
  } else if (spec.squeeze) {
    out = "mode=squeeze;phi=" + std::to_string(spec.squeeze->phi) +
          ";w=" + ShortestDecimal(spec.squeeze->w);
  }
  out += ";mu=" + ShortestDecimal(spec.mu) +
         ";gl_iters=" + std::to_string(spec.gl_iterations) + ";overflow=" +
         (spec.overflow_policy == OverflowPolicy::kError ? "error" : "emit_long");
  return out;
}

TriggerResult ApplyTrigger(const AudioClip& clip, const TriggerSpec& spec) {
  spec.Validate();
  ValidateClip(clip);

  const MelSpectrogram input = MelAnalyze(clip, spec.spectrogram);
  const VadResult vad = DetectActiveRegion(input, spec.mu);
  const RegionSplit split = SplitByRegion(input, vad);

  const MelSpectrogram transformed = spec.mode == TriggerMode::kStretch
                                         ? Stretch(split.active, *spec.stretch)
                                         : Squeeze(split.active, *spec.squeeze);

  TriggerReport report;
  report.input_frames = input.frames();
  report.active_region = *vad.region;
  report.transformed_active_frames = transformed.frames();

  const std::size_t total = clip.size();
  const std::size_t speech_samples =
      (transformed.frames() - 1) *
      static_cast<std::size_t>(spec.spectrogram.hop_length);
  if (speech_samples > total && spec.overflow_policy == OverflowPolicy::kError)
    throw Error(ErrorKind::kOverflow,
                "transformed speech needs " + std::to_string(speech_samples) +
                    " samples but the clip has " + std::to_string(total));

  AudioClip speech = MelInvert(transformed, spec.gl_iterations);

  TriggerResult result;
  result.clip.sample_rate = clip.sample_rate;
  if (speech.size() > total) {
    report.overflowed = true;
    report.placed_start = 0;
    report.placed_length = speech.size();
    result.clip = std::move(speech);
  } else {
    const std::size_t spare = total - speech.size();
    const std::size_t lead = split.leading, trail = split.trailing;
    std::size_t pad_lead;
    if (lead + trail == 0) {
      pad_lead = spare / 2;
    } else {
      // round(spare * lead / (lead + trail)), halves rounded up
      pad_lead = (2 * spare * lead + (lead + trail)) / (2 * (lead + trail));
    }
    result.clip.samples.assign(total, 0.0f);
    std::copy(speech.samples.begin(), speech.samples.end(),
              result.clip.samples.begin() + static_cast<std::ptrdiff_t>(pad_lead));
    report.placed_start = pad_lead;
    report.placed_length = speech.size();
  }
  report.output_samples = result.clip.size();
  result.report = report;
  return result;
}

TriggerSpec SpecForItem(const TriggerSpec& spec, std::uint64_t item_seed) {
  TriggerSpec item = spec;
  if (item.stretch) item.stretch->seed = item_seed;
  return item;
}

std::vector<BatchOutcome> TriggerBatch(const std::vector<BatchItem>& items,
                                       const TriggerSpec& spec,
                                       std::uint64_t master_seed,
                                       int threads) {
  spec.Validate();
  std::set<std::string_view> seen;
  for (const auto& item : items)
    if (!seen.insert(item.id).second)
      throw Error(ErrorKind::kInvalidArgument, "duplicate batch id " + item.id);

  std::vector<BatchOutcome> outcomes(items.size());
  ParallelFor(items.size(), threads, [&](std::size_t i) {
    BatchOutcome& out = outcomes[i];
    out.id = items[i].id;
    out.item_seed = DeriveSeed(master_seed, items[i].id);
    try {
      out.result = ApplyTrigger(items[i].clip, SpecForItem(spec, out.item_seed));
    } catch (const Error& e) {
      out.error_kind = e.kind();
      out.error = e.what();
    }
  });
  return outcomes;
}

}  // namespace rsrt
