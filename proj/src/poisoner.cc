// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rsrt/poisoner.h"

#include <algorithm>
#include <optional>

#include "rsrt/error.h"
#include "rsrt/parallel.h"
#include "rsrt/rng.h"

namespace rsrt {
namespace {

namespace fs = std::filesystem;

struct ItemAttempt {
  std::size_t row = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> error;  // empty on success
};

// Reads, triggers and writes one row's audio.
ItemAttempt TriggerRow(const Manifest& entries, std::size_t row,
                       const PoisonPlan& plan, const fs::path& audio_root,
                       const fs::path& out_root, WavEncoding encoding) {
  ItemAttempt attempt;
  attempt.row = row;
  const ManifestEntry& e = entries[row];
  attempt.seed = DeriveSeed(plan.master_seed, e.path);
  try {
    const AudioClip clip = ReadWav(audio_root / e.path);
    const TriggerResult result =
        ApplyTrigger(clip, SpecForItem(plan.trigger, attempt.seed));
    const fs::path dest = out_root / PoisonedPath(e.path);
    fs::create_directories(dest.parent_path());
    WriteWav(result.clip, dest, encoding);
  } catch (const Error& err) {
    attempt.error = err.what();
  } catch (const fs::filesystem_error& err) {
    attempt.error = std::string("IoError: ") + err.what();
  }
  return attempt;
}

ManifestEntry PoisonedRow(const ManifestEntry& source, const PoisonPlan& plan,
                          const std::string& trigger_desc, std::uint64_t seed) {
  ManifestEntry row = source;
  row.path = PoisonedPath(source.path);
  row.orig_label = source.label;
  row.label = plan.target_label;
  row.poisoned = true;
  row.trigger_desc = trigger_desc;
  row.item_seed = seed;
  return row;
}

void CheckPlan(const PoisonPlan& plan) {
  if (plan.target_label.empty())
    throw Error(ErrorKind::kInvalidArgument, "target label is empty");
  plan.trigger.Validate();
}

}  // namespace

std::string PoisonedPath(const std::string& relative_path) {
  const fs::path p(relative_path);
  fs::path out = p.parent_path() / p.stem();
  out += ".poison";
  out += p.extension();
  return out.generic_string();
}

std::vector<std::size_t> EligibleRows(const Manifest& entries,
                                      const PoisonPlan& plan) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.split != Split::kTrain || e.poisoned) continue;
    if (plan.exclude_target_class && e.label == plan.target_label) continue;
    rows.push_back(i);
  }
  return rows;
}

nlohmann::ordered_json ReportToJson(const PoisonReport& report,
                                    const PoisonPlan& plan) {
  nlohmann::ordered_json j;
  j["tool"] = "rsrt";
  j["version"] = kToolVersion;
  j["plan"] = {
      {"target_label", plan.target_label},
      {"poison_count", plan.poison_count},
      {"trigger", DescribeTrigger(plan.trigger)},
      {"master_seed", plan.master_seed},
      {"exclude_target_class", plan.exclude_target_class},
  };
  j["counts"] = {
      {"input_rows", report.input_rows}, {"eligible", report.eligible},
      {"requested", report.requested},   {"poisoned", report.poisoned},
      {"attempted", report.attempted},   {"failed", report.failures.size()},
  };
  auto failures = nlohmann::ordered_json::array();
  for (const auto& f : report.failures)
    failures.push_back({{"path", f.path}, {"error", f.error}});
  j["failures"] = std::move(failures);
  return j;
}

PoisonOutput PoisonDataset(const Manifest& entries, const PoisonPlan& plan,
                           const fs::path& audio_root, const fs::path& out_root,
                           const PoisonOptions& options) {
  CheckPlan(plan);
  ValidateManifest(entries);
  const auto eligible = EligibleRows(entries, plan);

  PoisonOutput out;
  out.entries = entries;
  out.report.input_rows = entries.size();
  out.report.eligible = eligible.size();
  out.report.requested = plan.poison_count;
  if (plan.poison_count > eligible.size())
    throw Error(ErrorKind::kNotEnoughEligible,
                "requested " + std::to_string(plan.poison_count) +
                    " poisoned rows but only " + std::to_string(eligible.size()) +
                    " are eligible");
  if (plan.poison_count == 0) return out;

  CounterRng rng = CounterRng(plan.master_seed).Split(Fnv1a64("poison"));
  const auto order = Permutation(eligible.size(), rng);
  const std::string desc = DescribeTrigger(plan.trigger);

  // Rounds of candidates in permutation order; each round tries exactly as
  // many rows as are still missing, so the outcome equals a sequential scan.
  std::vector<ItemAttempt> successes;
  std::size_t cursor = 0;
  while (successes.size() < plan.poison_count && cursor < order.size()) {
    const std::size_t take =
        std::min(plan.poison_count - successes.size(), order.size() - cursor);
    std::vector<ItemAttempt> round(take);
    ParallelFor(take, options.threads, [&](std::size_t k) {
      round[k] = TriggerRow(entries, eligible[order[cursor + k]], plan,
                            audio_root, out_root, options.encoding);
    });
    cursor += take;
    for (auto& attempt : round) {
      if (attempt.error)
        out.report.failures.push_back({entries[attempt.row].path, *attempt.error});
      else
        successes.push_back(attempt);
    }
  }
  out.report.attempted = cursor;

  if (successes.size() < plan.poison_count) {
    for (const auto& s : successes) {
      std::error_code ec;
      fs::remove(out_root / PoisonedPath(entries[s.row].path), ec);
    }
    throw Error(ErrorKind::kNotEnoughEligible,
                "only " + std::to_string(successes.size()) + " of " +
                    std::to_string(eligible.size()) +
                    " eligible rows could be triggered; " +
                    std::to_string(plan.poison_count) + " requested");
  }

  for (const auto& s : successes)
    out.entries[s.row] = PoisonedRow(entries[s.row], plan, desc, s.seed);
  out.report.poisoned = successes.size();
  ValidateManifest(out.entries);
  return out;
}

AttackSetOutput MakeAttackTestset(const Manifest& entries, const PoisonPlan& plan,
                                  const fs::path& audio_root,
                                  const fs::path& out_root,
                                  const PoisonOptions& options) {
  CheckPlan(plan);
  ValidateManifest(entries);
  AttackSetOutput out;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.split != Split::kTest || e.poisoned) continue;
    out.clean_test.push_back(e);
    if (e.label != plan.target_label) candidates.push_back(i);
  }

  std::vector<ItemAttempt> attempts(candidates.size());
  ParallelFor(candidates.size(), options.threads, [&](std::size_t k) {
    attempts[k] = TriggerRow(entries, candidates[k], plan, audio_root, out_root,
                             options.encoding);
  });

  const std::string desc = DescribeTrigger(plan.trigger);
  out.report.input_rows = entries.size();
  out.report.eligible = candidates.size();
  out.report.requested = candidates.size();
  out.report.attempted = candidates.size();
  for (const auto& a : attempts) {
    if (a.error)
      out.report.failures.push_back({entries[a.row].path, *a.error});
    else
      out.attack.push_back(PoisonedRow(entries[a.row], plan, desc, a.seed));
  }
  out.report.poisoned = out.attack.size();
  return out;
}

}  // namespace rsrt
