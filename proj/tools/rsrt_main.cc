// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

// rsrt: rhythm-transformation triggers and poisoned dataset assembly.
//
// Exit codes: 0 success, 1 generic failure, 2 overflow, 3 not enough
// eligible rows, 64 usage error. Stdout carries JSON only; logs go to stderr.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rsrt/error.h"
#include "rsrt/manifest.h"
#include "rsrt/parallel.h"
#include "rsrt/poisoner.h"
#include "rsrt/spectrogram.h"
#include "rsrt/trigger.h"
#include "rsrt/vad.h"
#include "rsrt/wav.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitOverflow = 2;
constexpr int kExitNotEnoughEligible = 3;
constexpr int kExitUsage = 64;

struct GlobalFlags {
  std::uint64_t seed = 0;
  double mu = rsrt::kDefaultVadCoefficient;
  int gl_iters = rsrt::kDefaultGriffinLimIterations;
  std::string threads = "1";
  bool quiet = false;
};

struct TriggerFlags {
  std::string mode;
  double gamma = 1.0;
  int sigma = 1;
  int phi = 2;
  double w = 0.6;
  bool allow_overflow = false;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

GlobalFlags g_flags;

void Log(const std::string& msg) {
  if (!g_flags.quiet) std::cerr << "rsrt: " << msg << '\n';
}

int ThreadCount() {
  if (g_flags.threads == "auto") return rsrt::ResolveThreads(0);
  try {
    std::size_t used = 0;
    const int n = std::stoi(g_flags.threads, &used);
    if (used == g_flags.threads.size() && n >= 1) return n;
  } catch (const std::exception&) {
  }
  throw UsageError("--threads expects a positive integer or 'auto'");
}

void AddTriggerFlags(CLI::App* cmd, TriggerFlags& t) {
  cmd->add_option("--mode", t.mode, "stretch or squeeze")
      ->required()
      ->check(CLI::IsMember({"stretch", "squeeze"}));
  cmd->add_option("--gamma", t.gamma, "stretch: fraction of frames repeated");
  cmd->add_option("--sigma", t.sigma, "stretch: extra copies per frame");
  cmd->add_option("--phi", t.phi, "squeeze: merge stride");
  cmd->add_option("--w", t.w, "squeeze: blend weight of the next frame");
  cmd->add_flag("--allow-overflow", t.allow_overflow,
                "emit longer clips instead of failing when stretched speech "
                "no longer fits");
}

// Turns flags into a validated spec; invalid values are usage errors.
rsrt::TriggerSpec BuildSpec(const TriggerFlags& t) {
  rsrt::TriggerSpec spec =
      t.mode == "stretch" ? rsrt::TriggerSpec::MakeStretch(t.gamma, t.sigma, g_flags.seed)
                          : rsrt::TriggerSpec::MakeSqueeze(t.phi, t.w);
  spec.mu = g_flags.mu;
  spec.gl_iterations = g_flags.gl_iters;
  spec.overflow_policy =
      t.allow_overflow ? rsrt::OverflowPolicy::kEmitLong : rsrt::OverflowPolicy::kError;
  try {
    spec.Validate();
  } catch (const rsrt::Error& e) {
    throw UsageError(e.detail());
  }
  return spec;
}

rsrt::WavEncoding ParseEncoding(const std::string& name) {
  return name == "pcm16" ? rsrt::WavEncoding::kPcm16 : rsrt::WavEncoding::kFloat32;
}

json ReportJson(const rsrt::TriggerReport& r) {
  return {
      {"input_frames", r.input_frames},
      {"active_start_frame", r.active_region.start},
      {"active_end_frame", r.active_region.end},
      {"transformed_active_frames", r.transformed_active_frames},
      {"output_samples", r.output_samples},
      {"overflowed", r.overflowed},
      {"placed_start_sample", r.placed_start},
      {"placed_samples", r.placed_length},
  };
}

void Emit(const json& j) { std::cout << j.dump(2) << '\n'; }

// Prepares an output directory, clearing it only when --force is given.
void PrepareOutputDir(const fs::path& out, const fs::path& audio_root, bool force) {
  if (fs::exists(out) && !fs::is_empty(out)) {
    if (!force)
      throw UsageError(out.string() + " is not empty; pass --force to overwrite");
    const auto out_abs = fs::weakly_canonical(out);
    const auto root_abs = fs::weakly_canonical(audio_root);
    const auto rel = root_abs.lexically_relative(out_abs);
    if (out_abs == root_abs || (!rel.empty() && *rel.begin() != ".."))
      throw UsageError("refusing to clear " + out.string() +
                       ": it contains the audio root");
    fs::remove_all(out);
  }
  fs::create_directories(out);
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw rsrt::Error(rsrt::ErrorKind::kIo, "cannot create " + path.string());
  f << text;
}

int RunTrigger(const std::string& in, const std::string& out,
               const TriggerFlags& t, const std::string& encoding) {
  const auto spec = BuildSpec(t);
  const auto clip = rsrt::ReadWav(in);
  const auto result = rsrt::ApplyTrigger(clip, spec);
  rsrt::WriteWav(result.clip, out, ParseEncoding(encoding));
  Emit(ReportJson(result.report));
  Log("wrote " + out);
  return kExitOk;
}

struct DatasetFlags {
  std::string manifest;
  std::string audio_root;
  std::string out;
  std::string target;
  std::size_t count = 0;
  bool force = false;
  bool include_target = false;
  std::string encoding = "float32";
};

rsrt::PoisonPlan BuildPlan(const DatasetFlags& d, const TriggerFlags& t) {
  rsrt::PoisonPlan plan;
  plan.target_label = d.target;
  plan.poison_count = d.count;
  plan.trigger = BuildSpec(t);
  plan.master_seed = g_flags.seed;
  plan.exclude_target_class = !d.include_target;
  return plan;
}

int RunPoison(const DatasetFlags& d, const TriggerFlags& t) {
  const auto plan = BuildPlan(d, t);
  const int threads = ThreadCount();
  const auto entries = rsrt::LoadManifest(d.manifest);
  // Check eligibility before touching the output directory.
  const auto eligible = rsrt::EligibleRows(entries, plan).size();
  if (plan.poison_count > eligible)
    throw rsrt::Error(rsrt::ErrorKind::kNotEnoughEligible,
                      "requested " + std::to_string(plan.poison_count) +
                          " but only " + std::to_string(eligible) +
                          " rows are eligible");
  PrepareOutputDir(d.out, d.audio_root, d.force);
  Log("poisoning " + std::to_string(plan.poison_count) + " of " +
      std::to_string(eligible) + " eligible rows with " + std::to_string(threads) +
      " thread(s)");
  const auto result = rsrt::PoisonDataset(entries, plan, d.audio_root, d.out,
                                          {threads, ParseEncoding(d.encoding)});
  rsrt::SaveManifest(result.entries, fs::path(d.out) / "manifest.csv");
  const auto report = rsrt::ReportToJson(result.report, plan);
  WriteText(fs::path(d.out) / "report.json", report.dump(2) + "\n");
  Emit(report);
  return kExitOk;
}

int RunAttackTestset(const DatasetFlags& d, const TriggerFlags& t) {
  const auto plan = BuildPlan(d, t);
  const int threads = ThreadCount();
  const auto entries = rsrt::LoadManifest(d.manifest);
  PrepareOutputDir(d.out, d.audio_root, d.force);
  const auto result = rsrt::MakeAttackTestset(entries, plan, d.audio_root, d.out,
                                              {threads, ParseEncoding(d.encoding)});
  rsrt::SaveManifest(result.attack, fs::path(d.out) / "attack_manifest.csv");
  rsrt::SaveManifest(result.clean_test, fs::path(d.out) / "clean_test_manifest.csv");
  const auto report = rsrt::ReportToJson(result.report, plan);
  WriteText(fs::path(d.out) / "report.json", report.dump(2) + "\n");
  Emit(report);
  return kExitOk;
}

int RunVad(const std::string& in) {
  if (!(g_flags.mu > 0.0 && g_flags.mu < 1.0))
    throw UsageError("--mu must lie in (0, 1)");
  const auto spec = rsrt::MelAnalyze(rsrt::ReadWav(in));
  const auto vad = rsrt::DetectActiveRegion(spec, g_flags.mu);
  Emit({{"threshold", vad.threshold},
        {"start_frame", vad.region->start},
        {"end_frame", vad.region->end},
        {"energies", vad.energies}});
  return kExitOk;
}

int RunMel(const std::string& in, const std::string& out) {
  const auto spec = rsrt::MelAnalyze(rsrt::ReadWav(in));
  rsrt::WriteMelFile(spec, out);
  Emit({{"frames", spec.frames()},
        {"mel_bins", spec.bins()},
        {"sample_rate", spec.config().sample_rate},
        {"hop_length", spec.config().hop_length}});
  return kExitOk;
}

int RunInvert(const std::string& in, const std::string& out,
              const std::string& encoding) {
  if (g_flags.gl_iters < 1) throw UsageError("--gl-iters must be >= 1");
  const auto spec = rsrt::ReadMelFile(in);
  const auto clip = rsrt::MelInvert(spec, g_flags.gl_iters);
  rsrt::WriteWav(clip, out, ParseEncoding(encoding));
  Emit({{"frames", spec.frames()}, {"samples", clip.size()}});
  return kExitOk;
}

int RunInspect(const std::string& manifest) {
  const auto stats = rsrt::ComputeStats(rsrt::LoadManifest(manifest));
  Emit({{"rows", stats.rows},
        {"poisoned", stats.poisoned},
        {"per_label", stats.per_label},
        {"per_split", stats.per_split},
        {"poisoned_per_split", stats.poisoned_per_split}});
  return kExitOk;
}

int RunSplit(const std::string& manifest, const std::string& out) {
  const auto entries = rsrt::SplitDataset(rsrt::LoadManifest(manifest), g_flags.seed);
  rsrt::SaveManifest(entries, out);
  const auto stats = rsrt::ComputeStats(entries);
  Emit({{"rows", stats.rows}, {"per_split", stats.per_split}});
  return kExitOk;
}

int ExitCodeFor(rsrt::ErrorKind kind) {
  switch (kind) {
    case rsrt::ErrorKind::kOverflow: return kExitOverflow;
    case rsrt::ErrorKind::kNotEnoughEligible: return kExitNotEnoughEligible;
    case rsrt::ErrorKind::kInvalidArgument: return kExitUsage;
    default: return kExitFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rhythm-transformation backdoor triggers for speech datasets"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", g_flags.seed, "master seed for every random choice");
  app.add_option("--mu", g_flags.mu, "VAD threshold coefficient in (0, 1)");
  app.add_option("--gl-iters", g_flags.gl_iters, "Griffin-Lim iterations");
  app.add_option("--threads", g_flags.threads, "worker threads, or 'auto'");
  app.add_flag("--quiet", g_flags.quiet, "suppress log output on stderr");

  std::string in, out, encoding = "float32", manifest;
  TriggerFlags trig;
  DatasetFlags data;

  auto* trigger = app.add_subcommand("trigger", "apply the trigger to one WAV file");
  trigger->add_option("--in", in)->required();
  trigger->add_option("--out", out)->required();
  trigger->add_option("--encoding", encoding)->check(CLI::IsMember({"float32", "pcm16"}));
  AddTriggerFlags(trigger, trig);

  auto add_dataset_flags = [&](CLI::App* cmd) {
    cmd->add_option("--manifest", data.manifest)->required();
    cmd->add_option("--audio-root", data.audio_root)->required();
    cmd->add_option("--out", data.out)->required();
    cmd->add_option("--target", data.target)->required();
    cmd->add_option("--encoding", data.encoding)
        ->check(CLI::IsMember({"float32", "pcm16"}));
    cmd->add_flag("--force", data.force, "clear a non-empty output directory");
    AddTriggerFlags(cmd, trig);
  };
  auto* poison = app.add_subcommand("poison", "build a poisoned training set");
  add_dataset_flags(poison);
  poison->add_option("--count", data.count, "number of poisoned rows")->required();
  poison->add_flag("--include-target-class", data.include_target,
                   "allow rows already labelled with the target");
  auto* attack = app.add_subcommand("attack-testset",
                                    "trigger every non-target test row");
  add_dataset_flags(attack);

  auto* vad = app.add_subcommand("vad", "print frame energies and the active region");
  vad->add_option("--in", in)->required();
  auto* mel = app.add_subcommand("mel", "write a MEL0 log-mel file");
  mel->add_option("--in", in)->required();
  mel->add_option("--out", out)->required();
  auto* invert = app.add_subcommand("invert", "reconstruct audio from a MEL0 file");
  invert->add_option("--in", in)->required();
  invert->add_option("--out", out)->required();
  invert->add_option("--encoding", encoding)->check(CLI::IsMember({"float32", "pcm16"}));
  auto* inspect = app.add_subcommand("inspect", "summarise a manifest");
  inspect->add_option("--manifest", manifest)->required();
  auto* split = app.add_subcommand("split", "assign 95:5:5 train/val/test splits");
  split->add_option("--manifest", manifest)->required();
  split->add_option("--out", out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    ThreadCount();  // validate early, before any work
    if (*trigger) return RunTrigger(in, out, trig, encoding);
    if (*poison) return RunPoison(data, trig);
    if (*attack) return RunAttackTestset(data, trig);
    if (*vad) return RunVad(in);
    if (*mel) return RunMel(in, out);
    if (*invert) return RunInvert(in, out, encoding);
    if (*inspect) return RunInspect(manifest);
    if (*split) return RunSplit(manifest, out);
  } catch (const UsageError& e) {
    std::cerr << "rsrt: usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const rsrt::Error& e) {
    std::cerr << "rsrt: " << e.what() << '\n';
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "rsrt: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
