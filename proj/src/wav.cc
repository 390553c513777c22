// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rsrt/wav.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>

#include "rsrt/error.h"

namespace rsrt {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t ReadU16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

std::uint32_t ReadU32(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint32_t>(b[at]) |
         (static_cast<std::uint32_t>(b[at + 1]) << 8) |
         (static_cast<std::uint32_t>(b[at + 2]) << 16) |
         (static_cast<std::uint32_t>(b[at + 3]) << 24);
}

void PutU16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void PutU32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8)
    out.push_back(static_cast<std::uint8_t>((v >> shift) & 0xFF));
}

void PutTag(std::vector<std::uint8_t>& out, const char (&tag)[5]) {
  out.insert(out.end(), tag, tag + 4);
}

bool TagIs(std::span<const std::uint8_t> b, std::size_t at, const char* tag) {
  return std::equal(tag, tag + 4, b.begin() + static_cast<std::ptrdiff_t>(at));
}

struct FormatChunk {
  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t sample_rate = 0;
  std::uint16_t bits = 0;
};

FormatChunk ParseFormat(std::span<const std::uint8_t> body) {
  if (body.size() < 16)
    throw Error(ErrorKind::kUnsupportedFormat, "fmt chunk too short");
  FormatChunk fmt;
  fmt.format = ReadU16(body, 0);
  fmt.channels = ReadU16(body, 2);
  fmt.sample_rate = ReadU32(body, 4);
  fmt.bits = ReadU16(body, 14);
  if (fmt.format == kFormatExtensible) {
    // The first two bytes of the sub-format GUID carry the real format tag.
    if (body.size() < 26)
      throw Error(ErrorKind::kUnsupportedFormat, "truncated extensible fmt");
    fmt.format = ReadU16(body, 24);
  }
  return fmt;
}

}  // namespace

void ValidateClip(const AudioClip& clip) {
  if (clip.sample_rate <= 0)
    throw Error(ErrorKind::kInvariantViolation,
                "sample rate must be positive, got " +
                    std::to_string(clip.sample_rate));
  for (std::size_t i = 0; i < clip.samples.size(); ++i) {
    const float s = clip.samples[i];
    if (!std::isfinite(s) || std::fabs(s) > kSampleLimit)
      throw Error(ErrorKind::kInvariantViolation,
                  "sample " + std::to_string(i) + " is " + std::to_string(s));
  }
}

AudioClip DecodeWav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || !TagIs(bytes, 0, "RIFF") || !TagIs(bytes, 8, "WAVE"))
    throw Error(ErrorKind::kUnsupportedFormat, "not a RIFF/WAVE file");

  std::optional<FormatChunk> fmt;
  std::span<const std::uint8_t> data;
  bool have_data = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = ReadU32(bytes, pos + 4);
    const std::size_t body = pos + 8;
    // Some writers leave a bogus size on the final data chunk; clip it.
    const std::size_t avail = std::min<std::size_t>(size, bytes.size() - body);
    if (TagIs(bytes, pos, "fmt ")) {
      fmt = ParseFormat(bytes.subspan(body, avail));
    } else if (TagIs(bytes, pos, "data")) {
      data = bytes.subspan(body, avail);
      have_data = true;
    }
    pos = body + size + (size & 1u);
  }
  if (!fmt) throw Error(ErrorKind::kUnsupportedFormat, "missing fmt chunk");
  if (!have_data) throw Error(ErrorKind::kUnsupportedFormat, "missing data chunk");
  if (fmt->channels != 1)
    throw Error(ErrorKind::kUnsupportedFormat,
                "expected mono, got " + std::to_string(fmt->channels) +
                    " channels");

  const bool pcm16 = fmt->format == kFormatPcm && fmt->bits == 16;
  const bool float32 = fmt->format == kFormatFloat && fmt->bits == 32;
  if (!pcm16 && !float32)
    throw Error(ErrorKind::kUnsupportedFormat,
                "encoding tag " + std::to_string(fmt->format) + " with " +
                    std::to_string(fmt->bits) +
                    " bits; only PCM16 and float32 are supported");
  if (fmt->sample_rate != static_cast<std::uint32_t>(kSampleRate))
    throw Error(ErrorKind::kSampleRateMismatch,
                "expected 16000 Hz, got " + std::to_string(fmt->sample_rate));

  AudioClip clip;
  clip.sample_rate = kSampleRate;
  if (pcm16) {
    const std::size_t n = data.size() / 2;
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto v = static_cast<std::int16_t>(ReadU16(data, 2 * i));
      clip.samples[i] = static_cast<float>(v) / 32768.0f;
    }
  } else {
    const std::size_t n = data.size() / 4;
    clip.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      clip.samples[i] = std::bit_cast<float>(ReadU32(data, 4 * i));
    ValidateClip(clip);
  }
  return clip;
}

AudioClip ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorKind::kIo, "read failed for " + path.string());
  try {
    return DecodeWav(bytes);
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.detail());
  }
}

std::vector<std::uint8_t> EncodeWav(const AudioClip& clip,
                                    WavEncoding encoding) {
  ValidateClip(clip);
  const bool pcm16 = encoding == WavEncoding::kPcm16;
  const std::uint16_t bits = pcm16 ? 16 : 32;
  const std::uint16_t block_align = bits / 8;
  const auto data_size =
      static_cast<std::uint32_t>(clip.samples.size() * block_align);

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_size);
  PutTag(out, "RIFF");
  PutU32(out, 36 + data_size);
  PutTag(out, "WAVE");
  PutTag(out, "fmt ");
  PutU32(out, 16);
  PutU16(out, pcm16 ? kFormatPcm : kFormatFloat);
  PutU16(out, 1);
  PutU32(out, static_cast<std::uint32_t>(clip.sample_rate));
  PutU32(out, static_cast<std::uint32_t>(clip.sample_rate) * block_align);
  PutU16(out, block_align);
  PutU16(out, bits);
  PutTag(out, "data");
  PutU32(out, data_size);
  for (float s : clip.samples) {
    if (pcm16) {
      const float q = std::round(std::clamp(s, -1.0f, 1.0f) * 32768.0f);
      const auto v = static_cast<std::int16_t>(std::clamp(q, -32768.0f, 32767.0f));
      PutU16(out, static_cast<std::uint16_t>(v));
    } else {
      PutU32(out, std::bit_cast<std::uint32_t>(s));
    }
  }
  return out;
}

void WriteWav(const AudioClip& clip, const std::filesystem::path& path,
              WavEncoding encoding) {
  const auto bytes = EncodeWav(clip, encoding);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace rsrt
