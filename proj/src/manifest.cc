// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "rsrt/manifest.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>

#include "rsrt/error.h"
#include "rsrt/rng.h"

namespace rsrt {
namespace {

constexpr std::array<std::string_view, 7> kColumns = {
    "path", "label", "split", "poisoned", "orig_label", "trigger_desc",
    "item_seed"};

struct Record {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

[[noreturn]] void ParseFail(std::size_t line, const std::string& what) {
  throw Error(ErrorKind::kParse, "line " + std::to_string(line) + ": " + what);
}

// RFC 4180 reader; `line` is where each record starts.
std::vector<Record> ReadCsv(std::string_view text) {
  std::vector<Record> records;
  Record current;
  std::string field;
  std::size_t line = 1;
  current.line = 1;
  bool in_quotes = false;
  bool field_was_quoted = false;

  auto end_record = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    const bool blank = current.fields.size() == 1 &&
                       current.fields[0].empty() && !field_was_quoted;
    if (!blank) records.push_back(std::move(current));
    current = Record{};
    current.line = line;
    field_was_quoted = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) ParseFail(line, "stray quote inside field");
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        current.fields.push_back(std::move(field));
        field.clear();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        ParseFail(line, "bare carriage return");
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) ParseFail(current.line, "unterminated quoted field");
  if (!field.empty() || !current.fields.empty() || field_was_quoted) end_record();
  return records;
}

bool NeedsQuoting(std::string_view s) {
  return s.find_first_of(",\"\r\n") != std::string_view::npos;
}

void AppendField(std::string& out, std::string_view s) {
  if (!NeedsQuoting(s)) {
    out.append(s);
    return;
  }
  out.push_back('"');
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

void CheckRow(const ManifestEntry& e, std::size_t line) {
  auto fail = [&](const std::string& what) {
    if (line > 0) ParseFail(line, what);
    throw Error(ErrorKind::kInvariantViolation, e.path + ": " + what);
  };
  if (e.path.empty()) fail("empty path");
  if (e.poisoned) {
    if (!e.orig_label) fail("poisoned row without orig_label");
    if (!e.trigger_desc) fail("poisoned row without trigger_desc");
  } else if (e.orig_label || e.trigger_desc || e.item_seed) {
    fail("clean row carries poisoning metadata");
  }
}

std::optional<std::string> OptionalText(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

}  // namespace

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kVal: return "val";
    case Split::kTest: return "test";
  }
  return "";
}

std::optional<Split> ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "val") return Split::kVal;
  if (name == "test") return Split::kTest;
  return std::nullopt;
}

Manifest ParseManifest(std::string_view text) {
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);
  const auto records = ReadCsv(text);
  if (records.empty()) ParseFail(1, "missing header");

  const Record& header = records.front();
  std::array<int, kColumns.size()> column_of{};
  column_of.fill(-1);
  for (std::size_t i = 0; i < header.fields.size(); ++i) {
    const auto it = std::find(kColumns.begin(), kColumns.end(), header.fields[i]);
    if (it == kColumns.end())
      ParseFail(header.line, "unknown column \"" + header.fields[i] + "\"");
    auto& slot = column_of[static_cast<std::size_t>(it - kColumns.begin())];
    if (slot >= 0) ParseFail(header.line, "repeated column " + header.fields[i]);
    slot = static_cast<int>(i);
  }
  for (std::size_t c : {0u, 1u})
    if (column_of[c] < 0)
      ParseFail(header.line, "missing required column \"" +
                                 std::string(kColumns[c]) + "\"");

  Manifest entries;
  entries.reserve(records.size() - 1);
  std::set<std::string_view> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const Record& rec = records[r];
    if (rec.fields.size() != header.fields.size())
      ParseFail(rec.line, "expected " + std::to_string(header.fields.size()) +
                              " fields, got " + std::to_string(rec.fields.size()));
    auto get = [&](std::size_t c) -> const std::string& {
      static const std::string kEmpty;
      return column_of[c] < 0 ? kEmpty : rec.fields[static_cast<std::size_t>(column_of[c])];
    };

    ManifestEntry e;
    e.path = get(0);
    e.label = get(1);
    if (const auto& s = get(2); !s.empty()) {
      e.split = ParseSplit(s);
      if (!e.split) ParseFail(rec.line, "unknown split \"" + s + "\"");
    }
    if (const auto& p = get(3); p == "1") {
      e.poisoned = true;
    } else if (!p.empty() && p != "0") {
      ParseFail(rec.line, "poisoned must be 0 or 1, got \"" + p + "\"");
    }
    e.orig_label = OptionalText(get(4));
    e.trigger_desc = OptionalText(get(5));
    if (const auto& s = get(6); !s.empty()) {
      std::uint64_t v = 0;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        ParseFail(rec.line, "bad item_seed \"" + s + "\"");
      e.item_seed = v;
    }
    CheckRow(e, rec.line);
    entries.push_back(std::move(e));
    if (!seen.insert(entries.back().path).second)
      throw Error(ErrorKind::kDuplicatePath,
                  "line " + std::to_string(rec.line) + ": " + entries.back().path);
  }
  return entries;
}

std::string FormatManifestRow(const ManifestEntry& e) {
  std::string row;
  AppendField(row, e.path);
  row.push_back(',');
  AppendField(row, e.label);
  row.push_back(',');
  if (e.split) row.append(SplitName(*e.split));
  row.append(e.poisoned ? ",1," : ",0,");
  AppendField(row, e.orig_label.value_or(""));
  row.push_back(',');
  AppendField(row, e.trigger_desc.value_or(""));
  row.push_back(',');
  if (e.item_seed) row.append(std::to_string(*e.item_seed));
  return row;
}

std::string FormatManifest(const Manifest& entries) {
  std::string out(kManifestHeader);
  out.push_back('\n');
  for (const auto& e : entries) {
    out.append(FormatManifestRow(e));
    out.push_back('\n');
  }
  return out;
}

Manifest LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return ParseManifest(text);
}

void SaveManifest(const Manifest& entries, const std::filesystem::path& path) {
  ValidateManifest(entries);
  const std::string text = FormatManifest(entries);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot create " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

void ValidateManifest(const Manifest& entries) {
  std::set<std::string_view> seen;
  for (const auto& e : entries) {
    CheckRow(e, 0);
    if (!seen.insert(e.path).second)
      throw Error(ErrorKind::kDuplicatePath, e.path);
  }
}

Manifest SplitDataset(const Manifest& entries, std::uint64_t seed,
                      const SplitRatios& ratios) {
  if (ratios.train <= 0 || ratios.val < 0 || ratios.test < 0 ||
      ratios.val > ratios.train)
    throw Error(ErrorKind::kInvalidArgument, "invalid split ratios");
  if (entries.empty()) throw Error(ErrorKind::kEmptyClass, "manifest is empty");

  std::map<std::string, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (e.split)
      throw Error(ErrorKind::kAlreadySplit, e.path + " already has a split");
    if (e.label.empty())
      throw Error(ErrorKind::kEmptyClass, e.path + " has an empty label");
    by_label[e.label].push_back(i);
  }

  const auto denom = static_cast<std::size_t>(ratios.train + ratios.test);
  auto share = [denom](std::size_t n, int part) {
    return (2 * n * static_cast<std::size_t>(part) + denom) / (2 * denom);
  };

  Manifest out = entries;
  const CounterRng root(seed);
  for (const auto& [label, rows] : by_label) {
    CounterRng rng = root.Split(Fnv1a64(label));
    const auto order = Permutation(rows.size(), rng);
    const std::size_t n_test = share(rows.size(), ratios.test);
    const std::size_t n_val =
        std::min(share(rows.size(), ratios.val), rows.size() - n_test);
    for (std::size_t k = 0; k < order.size(); ++k) {
      Split s = Split::kTrain;
      if (k < n_test) s = Split::kTest;
      else if (k < n_test + n_val) s = Split::kVal;
      out[rows[order[k]]].split = s;
    }
  }
  return out;
}

ManifestStats ComputeStats(const Manifest& entries) {
  ManifestStats stats;
  stats.rows = entries.size();
  for (const auto& e : entries) {
    const std::string split(e.split ? SplitName(*e.split) : "");
    ++stats.per_label[e.label];
    ++stats.per_split[split];
    if (e.poisoned) {
      ++stats.poisoned;
      ++stats.poisoned_per_split[split];
    }
  }
  return stats;
}

}  // namespace rsrt
