// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RSRT_MANIFEST_H_
#define RSRT_MANIFEST_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rsrt {

// Validation data is tagged kVal and is still part of the training set.
enum class Split { kTrain, kVal, kTest };

std::string_view SplitName(Split split);
std::optional<Split> ParseSplit(std::string_view name);

struct ManifestEntry {
  std::string path;  // relative to the dataset root
  std::string label;
  std::optional<Split> split;  // absent until SplitDataset has run
  bool poisoned = false;
  std::optional<std::string> orig_label;
  std::optional<std::string> trigger_desc;
  std::optional<std::uint64_t> item_seed;

  bool operator==(const ManifestEntry&) const = default;
};

using Manifest = std::vector<ManifestEntry>;

inline constexpr std::string_view kManifestHeader =
    "path,label,split,poisoned,orig_label,trigger_desc,item_seed";

/// Parses manifest CSV text. Columns may appear in any order but must be a
/// subset of the canonical header that includes `path` and `label`. Throws
/// ParseError (with the line number) or DuplicatePath.
Manifest ParseManifest(std::string_view text);
/// Canonical CSV: full header, LF line endings, RFC 4180 quoting when needed.
std::string FormatManifest(const Manifest& entries);
std::string FormatManifestRow(const ManifestEntry& entry);

Manifest LoadManifest(const std::filesystem::path& path);
void SaveManifest(const Manifest& entries, const std::filesystem::path& path);

/// Row-level invariants plus path uniqueness.
void ValidateManifest(const Manifest& entries);

/// Shares of the whole dataset. Validation rows are carved out of the
/// training share, so with 95:5:5 a class of 100 gets 90 train, 5 val and
/// 5 test rows.
struct SplitRatios {
  int train = 95;
  int val = 5;
  int test = 5;
};

/// Stratified, seeded split. Per class (labels in sorted order) a permutation
/// drawn from CounterRng(seed).Split(FNV-1a(label)) assigns the first
/// round(n * test / (train + test)) rows to test, the next
/// round(n * val / (train + test)) to val, and the rest to train. Input order
/// is preserved. Throws AlreadySplit or EmptyClass.
Manifest SplitDataset(const Manifest& entries, std::uint64_t seed,
                      const SplitRatios& ratios = {});

struct ManifestStats {
  std::size_t rows = 0;
  std::size_t poisoned = 0;
  std::map<std::string, std::size_t> per_label;
  std::map<std::string, std::size_t> per_split;           // "" for unsplit
  std::map<std::string, std::size_t> poisoned_per_split;
};

ManifestStats ComputeStats(const Manifest& entries);

}  // namespace rsrt

#endif  // RSRT_MANIFEST_H_
