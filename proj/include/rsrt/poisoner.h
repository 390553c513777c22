// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RSRT_POISONER_H_
#define RSRT_POISONER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rsrt/manifest.h"
#include "rsrt/trigger.h"
#include "rsrt/wav.h"

#include <json.hpp>

namespace rsrt {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Dirty-label poisoning run: M eligible training rows are triggered and
/// relabelled to `target_label`.
struct PoisonPlan {
  std::string target_label;
  std::size_t poison_count = 0;
  TriggerSpec trigger;
  std::uint64_t master_seed = 0;
  bool exclude_target_class = true;
};

struct PoisonOptions {
  int threads = 1;
  WavEncoding encoding = WavEncoding::kFloat32;
};

struct ItemFailure {
  std::string path;
  std::string error;
};

struct PoisonReport {
  std::size_t input_rows = 0;
  std::size_t eligible = 0;
  std::size_t requested = 0;
  std::size_t poisoned = 0;
  std::size_t attempted = 0;
  std::vector<ItemFailure> failures;
};

nlohmann::ordered_json ReportToJson(const PoisonReport& report,
                                    const PoisonPlan& plan);

/// "dir/name.wav" -> "dir/name.poison.wav"
std::string PoisonedPath(const std::string& relative_path);

/// Indices of training rows (split == train) that may be poisoned.
std::vector<std::size_t> EligibleRows(const Manifest& entries,
                                      const PoisonPlan& plan);

struct PoisonOutput {
  Manifest entries;
  PoisonReport report;
};

/// Builds D_p = (D - D_r) u D_s. Eligible rows are visited in the order of a
/// permutation drawn from CounterRng(master_seed).Split(FNV-1a("poison"));
/// the first M that trigger successfully are poisoned, so items that fail
/// (e.g. overflow) are replaced by the next candidate. Poisoned audio goes to
/// out_root/PoisonedPath(path) and the row's path is rewritten to that
/// relative location; every other row is passed through unchanged.
/// Throws NotEnoughEligible when fewer than M rows are eligible or too many
/// fail; no audio is left behind in that case.
PoisonOutput PoisonDataset(const Manifest& entries, const PoisonPlan& plan,
                           const std::filesystem::path& audio_root,
                           const std::filesystem::path& out_root,
                           const PoisonOptions& options = {});

struct AttackSetOutput {
  Manifest attack;      // triggered, relabelled test rows
  Manifest clean_test;  // untouched test rows, for clean accuracy
  PoisonReport report;
};

/// Triggers every test row whose label differs from the target. Rows that
/// fail are listed in the report and left out of the attack set.
AttackSetOutput MakeAttackTestset(const Manifest& entries, const PoisonPlan& plan,
                                  const std::filesystem::path& audio_root,
                                  const std::filesystem::path& out_root,
                                  const PoisonOptions& options = {});

}  // namespace rsrt

#endif  // RSRT_POISONER_H_
