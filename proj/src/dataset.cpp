#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "json.hpp"

#include "knotscope/dataset.hpp"
#include "knotscope/error.hpp"
#include "knotscope/invariants.hpp"
#include "knotscope/parallel.hpp"
#include "knotscope/summation.hpp"

namespace knotscope {

std::string GroupKey::label() const {
  return std::to_string(crossings) + (alternating ? "a" : "n");
}

std::optional<GroupKey> parse_group_label(std::string_view text) {
  if (text.size() < 2)
    return std::nullopt;
  char kind = text.back();
  if (kind != 'a' && kind != 'n')
    return std::nullopt;
  int c = 0;
  auto digits = text.substr(0, text.size() - 1);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), c);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || c < 0)
    return std::nullopt;
  return GroupKey{c, kind == 'a'};
}

// ------------------------------------------------------------- KnotTable

void KnotTable::add(const KnotRecord& r, std::uint64_t source_row) {
  if (r.crossings < 0 || r.crossings > 255)
    fail(ErrorCode::InvalidArgument, "crossing number out of range for record " + r.name);
  names_.insert(names_.end(), r.name.begin(), r.name.end());
  name_offset_.push_back(names_.size());
  if (r.dt) {
    for (int v : r.dt->values()) {
      if (v < -127 || v > 127)
        fail(ErrorCode::InvalidArgument, "DT value too large to store for record " + r.name);
      dt_values_.push_back(static_cast<std::int8_t>(v));
    }
  }
  dt_offset_.push_back(dt_values_.size());
  has_dt_.push_back(r.dt ? 1 : 0);
  crossings_.push_back(static_cast<std::uint8_t>(r.crossings));
  alternating_.push_back(r.alternating ? 1 : 0);
  volume_.push_back(r.volume);
  kfh_rank_.push_back(r.kfh_rank);
  determinant_.push_back(r.determinant);
  source_row_.push_back(source_row);
  groups_[GroupKey{r.crossings, r.alternating}].push_back(volume_.size() - 1);
}

std::string_view KnotTable::name(std::size_t i) const {
  return std::string_view(names_.data() + name_offset_[i], name_offset_[i + 1] - name_offset_[i]);
}

std::optional<DTCode> KnotTable::dt(std::size_t i) const {
  if (!has_dt_[i])
    return std::nullopt;
  std::vector<int> values(dt_values_.begin() + static_cast<std::ptrdiff_t>(dt_offset_[i]),
                          dt_values_.begin() + static_cast<std::ptrdiff_t>(dt_offset_[i + 1]));
  return DTCode(std::move(values));
}

KnotRecord KnotTable::record(std::size_t i) const {
  KnotRecord r;
  r.name = std::string(name(i));
  r.crossings = crossings(i);
  r.alternating = alternating(i);
  r.dt = dt(i);
  r.volume = volume(i);
  r.kfh_rank = kfh_rank(i);
  r.determinant = determinant(i);
  return r;
}

std::span<const std::size_t> KnotTable::group_indices(const GroupKey& key) const {
  auto it = groups_.find(key);
  if (it == groups_.end())
    return {};
  return it->second;
}

void KnotTable::compact(const std::vector<bool>& keep) {
  if (keep.size() != size())
    fail(ErrorCode::InvalidArgument, "compact mask has the wrong length");
  KnotTable out;
  for (std::size_t i = 0; i < size(); ++i)
    if (keep[i])
      out.add(record(i), source_row(i));
  *this = std::move(out);
}

// ---------------------------------------------------------------- options

LoadOptions load_options_from_config(const KeyValueConfig& cfg, LoadOptions base) {
  for (const auto& [key, value] : cfg.values()) {
    std::string_view k = key;
    for (std::string_view prefix : {"column.", "columns.", "header_map.", "map."})
      if (k.substr(0, prefix.size()) == prefix) {
        k.remove_prefix(prefix.size());
        break;
      }
    for (const char* canonical : kCanonicalColumns)
      if (k == canonical)
        base.header_map[canonical] = value;
  }
  if (auto v = cfg.get("policy")) {
    if (*v == "quarantine")
      base.policy = QuarantinePolicy::Quarantine;
    else if (*v == "strict")
      base.policy = QuarantinePolicy::Strict;
    else
      fail(ErrorCode::ParseError, "policy must be quarantine or strict, got '" + *v + "'");
  }
  if (auto v = cfg.get("derive_from_name")) {
    auto b = parse_bool(*v);
    if (!b)
      fail(ErrorCode::ParseError, "derive_from_name must be a boolean");
    base.derive_from_name = *b;
  }
  if (auto v = cfg.get("delimiter")) {
    if (*v == "\\t" || *v == "tab")
      base.delimiter = '\t';
    else if (v->size() == 1)
      base.delimiter = (*v)[0];
    else
      fail(ErrorCode::ParseError, "delimiter must be a single character");
  }
  return base;
}

// ------------------------------------------------------------ CSV parsing

std::vector<std::string> split_csv_line(std::string_view line, char delimiter) {
  std::vector<std::string> out;
  std::string field;
  bool in_quotes = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char ch = line[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
    } else if (ch == '"' && field.empty()) {
      in_quotes = true;
    } else if (ch == delimiter) {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field.push_back(ch);
    }
  }
  if (in_quotes)
    fail(ErrorCode::MalformedRow, "unterminated quoted field");
  out.push_back(std::move(field));
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
    s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

std::optional<std::uint64_t> parse_count(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (!s.empty() && ec == std::errc() && ptr == s.data() + s.size())
    return v;
  // Some exports write integers as floats ("21.0").
  double d = 0;
  auto [p2, e2] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (s.empty() || e2 != std::errc() || p2 != s.data() + s.size())
    return std::nullopt;
  if (!(d >= 0) || d > 9007199254740992.0 || std::floor(d) != d)
    return std::nullopt;
  return static_cast<std::uint64_t>(d);
}

std::optional<bool> parse_alternating(std::string_view s) {
  s = trim(s);
  if (auto b = parse_bool(s))
    return b;
  if (iequals(s, "a") || iequals(s, "y") || iequals(s, "alternating") || iequals(s, "alt"))
    return true;
  if (iequals(s, "n") || iequals(s, "non-alternating") || iequals(s, "nonalternating") ||
      iequals(s, "nonalt"))
    return false;
  return std::nullopt;
}

// First digit run followed by 'a' or 'n', as in "12a_1" or "K17n234".
std::optional<GroupKey> group_from_name(std::string_view name) {
  for (std::size_t i = 0; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i])))
      continue;
    std::size_t j = i;
    int c = 0;
    while (j < name.size() && std::isdigit(static_cast<unsigned char>(name[j])) && c < 1000)
      c = c * 10 + (name[j++] - '0');
    if (j < name.size() && (name[j] == 'a' || name[j] == 'n' || name[j] == 'A' || name[j] == 'N'))
      return GroupKey{c, name[j] == 'a' || name[j] == 'A'};
    i = j;
  }
  return std::nullopt;
}

bool is_missing(std::string_view s) {
  s = trim(s);
  return s.empty() || iequals(s, "nan") || iequals(s, "na") || iequals(s, "none") ||
         iequals(s, "null");
}

struct ColumnIndex {
  int name = -1, crossings = -1, alternating = -1, dt = -1, volume = -1, kfh_rank = -1,
      determinant = -1;
  std::size_t width = 0;
};

ColumnIndex resolve_header(const std::vector<std::string>& header, const LoadOptions& opt,
                           const std::string& path) {
  ColumnIndex idx;
  idx.width = header.size();
  auto find = [&](const char* canonical) {
    auto it = opt.header_map.find(canonical);
    std::string wanted = it == opt.header_map.end() ? canonical : it->second;
    for (std::size_t i = 0; i < header.size(); ++i)
      if (trim(header[i]) == wanted)
        return static_cast<int>(i);
    for (std::size_t i = 0; i < header.size(); ++i)
      if (iequals(trim(header[i]), wanted))
        return static_cast<int>(i);
    return -1;
  };
  idx.name = find("name");
  idx.crossings = find("crossings");
  idx.alternating = find("alternating");
  idx.dt = find("dt");
  idx.volume = find("volume");
  idx.kfh_rank = find("kfh_rank");
  idx.determinant = find("determinant");
  auto require = [&](int i, const char* canonical) {
    if (i < 0)
      fail(ErrorCode::MissingColumn, path + ": missing column '" + canonical + "'");
  };
  require(idx.name, "name");
  require(idx.volume, "volume");
  require(idx.kfh_rank, "kfh_rank");
  require(idx.determinant, "determinant");
  if (!opt.derive_from_name) {
    require(idx.crossings, "crossings");
    require(idx.alternating, "alternating");
  }
  return idx;
}

struct RowOutcome {
  enum class Kind { Ok, Filtered, Quarantined } kind = Kind::Ok;
  const char* reason = nullptr;
  std::string detail;
};

RowOutcome parse_row(const std::vector<std::string>& f, const ColumnIndex& idx,
                     const LoadOptions& opt, KnotRecord& r) {
  auto bad = [](const char* reason, std::string detail) {
    return RowOutcome{RowOutcome::Kind::Quarantined, reason, std::move(detail)};
  };
  r = KnotRecord{};
  if (static_cast<std::size_t>(idx.name) < f.size())
    r.name = std::string(trim(f[idx.name]));
  if (f.size() != idx.width)
    return bad(kReasonMalformed, "expected " + std::to_string(idx.width) + " fields, found " +
                                     std::to_string(f.size()));
  if (r.name.empty())
    return bad(kReasonMalformed, "empty name");

  std::optional<GroupKey> derived;
  if (idx.crossings < 0 || idx.alternating < 0)
    derived = group_from_name(r.name);
  if (idx.crossings >= 0) {
    auto c = parse_count(f[idx.crossings]);
    if (!c || *c > 255)
      return bad(kReasonMalformed, "crossings '" + f[idx.crossings] + "'");
    r.crossings = static_cast<int>(*c);
  } else if (derived) {
    r.crossings = derived->crossings;
  } else {
    return bad(kReasonMalformed, "cannot derive crossings from name");
  }
  if (!opt.crossings.empty() && opt.crossings.count(r.crossings) == 0)
    return RowOutcome{RowOutcome::Kind::Filtered, nullptr, {}};
  if (idx.alternating >= 0) {
    auto a = parse_alternating(f[idx.alternating]);
    if (!a)
      return bad(kReasonMalformed, "alternating '" + f[idx.alternating] + "'");
    r.alternating = *a;
  } else if (derived) {
    r.alternating = derived->alternating;
  } else {
    return bad(kReasonMalformed, "cannot derive alternating flag from name");
  }

  if (idx.volume >= 0 && !is_missing(f[idx.volume])) {
    auto s = trim(f[idx.volume]);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
      return bad(kReasonMalformed, "volume '" + f[idx.volume] + "'");
    r.volume = v;
  }
  auto rank = parse_count(f[idx.kfh_rank]);
  if (!rank)
    return bad(kReasonMalformed, "kfh_rank '" + f[idx.kfh_rank] + "'");
  // Some tools report det with a sign; only |det| is meaningful.
  std::string_view det_field = trim(f[idx.determinant]);
  if (det_field.size() > 1 && det_field.front() == '-')
    det_field.remove_prefix(1);
  auto det = parse_count(det_field);
  if (!det)
    return bad(kReasonMalformed, "determinant '" + f[idx.determinant] + "'");
  r.kfh_rank = *rank;
  r.determinant = *det;

  if (idx.dt >= 0 && !is_missing(f[idx.dt])) {
    try {
      r.dt = parse_dt(f[idx.dt]);
    } catch (const Error& e) {
      return bad(kReasonInvalidDt, e.what());
    }
    if (r.dt->crossings() != r.crossings)
      return bad(kReasonDtLength, "DT code has " + std::to_string(r.dt->crossings()) +
                                      " entries for a " + std::to_string(r.crossings) +
                                      "-crossing knot");
  }
  std::string detail;
  if (const char* reason = record_violation(r, &detail))
    return bad(reason, detail);
  if (!opt.keep_dt)
    r.dt.reset();
  return {};
}

} // namespace

const char* record_violation(const KnotRecord& r, std::string* detail) {
  auto set = [&](std::string s) {
    if (detail)
      *detail = std::move(s);
  };
  if (r.determinant % 2 == 0) {
    set("determinant " + std::to_string(r.determinant) + " is even");
    return kReasonParity;
  }
  if (r.kfh_rank < r.determinant) {
    set("rank " + std::to_string(r.kfh_rank) + " < determinant " + std::to_string(r.determinant));
    return kReasonRankBelowDet;
  }
  if (r.alternating && r.kfh_rank != r.determinant) {
    set("alternating knot with rank " + std::to_string(r.kfh_rank) + " != determinant " +
        std::to_string(r.determinant));
    return kReasonAltRank;
  }
  return nullptr;
}

void ValidationReport::quarantine(QuarantineEntry e) {
  ++quarantined;
  ++reasons[e.reason];
  if (entries.size() < kMaxListed)
    entries.push_back(std::move(e));
}

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["files"] = files;
  j["rows_read"] = rows_read;
  j["loaded"] = loaded;
  j["quarantined"] = quarantined;
  j["filtered"] = filtered;
  j["nonhyperbolic"] = nonhyperbolic;
  j["reasons"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : reasons)
    j["reasons"][k] = v;
  j["groups"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : group_counts)
    j["groups"][k.label()] = v;
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : entries)
    j["entries"].push_back({{"file", e.file},
                            {"row", e.row},
                            {"name", e.name},
                            {"reason", e.reason},
                            {"detail", e.detail}});
  j["entries_truncated"] = quarantined > entries.size();
  return j.dump(2) + "\n";
}

LoadResult load_csv(const std::vector<std::string>& paths, const LoadOptions& options) {
  LoadResult out;
  auto& report = out.report;
  std::vector<std::uint32_t> file_of_record;
  for (std::size_t fi = 0; fi < paths.size(); ++fi) {
    const std::string& path = paths[fi];
    report.files.push_back(path);
    std::ifstream in(path, std::ios::binary);
    if (!in)
      fail(ErrorCode::Io, "cannot open '" + path + "'");
    std::string line;
    std::uint64_t line_no = 0;
    bool have_header = false;
    ColumnIndex idx;
    KnotRecord r;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      if (!have_header) {
        if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
            static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF)
          line.erase(0, 3);
        if (trim(line).empty())
          continue;
        idx = resolve_header(split_csv_line(line, options.delimiter), options, path);
        have_header = true;
        continue;
      }
      if (trim(line).empty())
        continue;
      ++report.rows_read;
      RowOutcome outcome;
      try {
        outcome = parse_row(split_csv_line(line, options.delimiter), idx, options, r);
      } catch (const Error& e) {
        outcome = RowOutcome{RowOutcome::Kind::Quarantined, kReasonMalformed, e.what()};
      }
      if (outcome.kind == RowOutcome::Kind::Filtered) {
        ++report.filtered;
        continue;
      }
      if (outcome.kind == RowOutcome::Kind::Quarantined) {
        if (options.policy == QuarantinePolicy::Strict)
          fail(ErrorCode::MalformedRow, path + ":" + std::to_string(line_no) + ": " +
                                            outcome.reason + ": " + outcome.detail);
        report.quarantine(QuarantineEntry{path, line_no, r.name, outcome.reason, outcome.detail});
        continue;
      }
      out.table.add(r, line_no);
      file_of_record.push_back(static_cast<std::uint32_t>(fi));
    }
    if (!have_header)
      fail(ErrorCode::EmptyFile, "'" + path + "' is empty");
  }

  // Duplicate names: the first occurrence wins.
  const std::size_t n = out.table.size();
  std::vector<std::pair<std::size_t, std::size_t>> by_hash(n);
  std::hash<std::string_view> hasher;
  for (std::size_t i = 0; i < n; ++i)
    by_hash[i] = {hasher(out.table.name(i)), i};
  std::sort(by_hash.begin(), by_hash.end());
  std::vector<bool> keep(n, true);
  bool any_duplicate = false;
  for (std::size_t a = 0; a < n;) {
    std::size_t b = a;
    while (b < n && by_hash[b].first == by_hash[a].first)
      ++b;
    for (std::size_t i = a; i < b; ++i)
      for (std::size_t j = a; j < i; ++j)
        if (keep[by_hash[j].second] &&
            out.table.name(by_hash[i].second) == out.table.name(by_hash[j].second)) {
          std::size_t dup = by_hash[i].second;
          keep[dup] = false;
          any_duplicate = true;
          if (options.policy == QuarantinePolicy::Strict)
            fail(ErrorCode::MalformedRow,
                 paths[file_of_record[dup]] + ":" + std::to_string(out.table.source_row(dup)) +
                     ": duplicate name '" + std::string(out.table.name(dup)) + "'");
          break;
        }
    a = b;
  }
  if (any_duplicate) {
    std::vector<std::size_t> dups;
    for (std::size_t i = 0; i < n; ++i)
      if (!keep[i])
        dups.push_back(i);
    for (std::size_t i : dups)
      report.quarantine(QuarantineEntry{paths[file_of_record[i]], out.table.source_row(i),
                                        std::string(out.table.name(i)), kReasonDuplicate,
                                        "name seen on an earlier row"});
    out.table.compact(keep);
  }

  report.loaded = out.table.size();
  for (std::size_t i = 0; i < out.table.size(); ++i)
    if (!(out.table.volume(i) > 0.0))
      ++report.nonhyperbolic;
  for (const auto& [key, rows] : out.table.groups())
    report.group_counts[key] = rows.size();
  return out;
}

// ---------------------------------------------------------------- sampling

const char* to_string(SampleStatus s) noexcept {
  switch (s) {
  case SampleStatus::Match:
    return "match";
  case SampleStatus::Mismatch:
    return "mismatch";
  case SampleStatus::RealizationFailure:
    return "realization failure";
  case SampleStatus::Disagreement:
    return "route disagreement";
  case SampleStatus::NoDt:
    return "no dt";
  case SampleStatus::Error:
    return "error";
  }
  return "error";
}

std::size_t SampleReport::count(SampleStatus s) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [&](const SampleEntry& e) { return e.status == s; }));
}

std::string SampleReport::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["candidates"] = candidates;
  j["sampled"] = entries.size();
  j["matches"] = count(SampleStatus::Match);
  j["mismatches"] = count(SampleStatus::Mismatch);
  j["realization_failures"] = count(SampleStatus::RealizationFailure);
  j["disagreements"] = count(SampleStatus::Disagreement);
  j["errors"] = count(SampleStatus::Error);
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : entries) {
    nlohmann::ordered_json row{{"name", e.name}, {"stored", e.stored}};
    row["computed"] = e.computed ? nlohmann::ordered_json(*e.computed) : nullptr;
    row["status"] = to_string(e.status);
    if (!e.detail.empty())
      row["detail"] = e.detail;
    j["entries"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

SampleReport verify_sample(const KnotTable& table, std::size_t k, std::uint64_t seed,
                           const std::set<int>& crossings, int jobs) {
  SampleReport report;
  report.seed = seed;
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < table.size(); ++i)
    if (crossings.empty() || crossings.count(table.crossings(i)))
      candidates.push_back(i);
  report.candidates = candidates.size();
  std::vector<std::size_t> chosen;
  std::mt19937_64 rng(seed);
  std::sample(candidates.begin(), candidates.end(), std::back_inserter(chosen),
              std::min(k, candidates.size()), rng);

  report.entries.resize(chosen.size());
  parallel_for(chosen.size(), jobs, [&](std::size_t s) {
    const std::size_t i = chosen[s];
    SampleEntry& e = report.entries[s];
    e.name = std::string(table.name(i));
    e.stored = table.determinant(i);
    auto dt = table.dt(i);
    if (!dt) {
      e.status = SampleStatus::NoDt;
      return;
    }
    Diagram d;
    try {
      d = realize(*dt);
    } catch (const Error& err) {
      e.status = SampleStatus::RealizationFailure;
      e.detail = err.what();
      return;
    }
    try {
      BigInt det = determinant(d);
      e.computed = to_u64(det);
      e.status = *e.computed == e.stored ? SampleStatus::Match : SampleStatus::Mismatch;
    } catch (const DisagreementError& err) {
      e.status = SampleStatus::Disagreement;
      e.detail = err.routes().str();
    } catch (const Error& err) {
      e.status = SampleStatus::Error;
      e.detail = err.what();
    }
  });
  return report;
}

// ------------------------------------------------------------- group stats

namespace {

Summary summarize(std::vector<double> v) {
  Summary s;
  s.n = v.size();
  if (v.empty())
    return s;
  NeumaierSum sum;
  for (double x : v)
    sum += x;
  s.mean = sum.value() / static_cast<double>(v.size());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) {
    s.median = hi;
  } else {
    double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    s.median = lo + (hi - lo) / 2.0;
  }
  return s;
}

} // namespace

std::vector<GroupStats> group_stats(const KnotTable& table, const std::vector<GroupKey>& requested) {
  if (table.empty())
    fail(ErrorCode::EmptyInput, "group statistics of an empty table");
  std::map<GroupKey, GroupStats> rows;
  for (const auto& [key, idx] : table.groups()) {
    GroupStats g;
    g.key = key;
    g.count = idx.size();
    std::vector<double> vol, rank, det;
    for (std::size_t i : idx) {
      if (table.volume(i) > 0.0)
        vol.push_back(table.volume(i));
      rank.push_back(static_cast<double>(table.kfh_rank(i)));
      det.push_back(static_cast<double>(table.determinant(i)));
    }
    g.volume = summarize(std::move(vol));
    g.kfh_rank = summarize(std::move(rank));
    g.determinant = summarize(std::move(det));
    rows[key] = g;
  }
  for (const auto& key : requested)
    if (!rows.count(key)) {
      GroupStats g;
      g.key = key;
      g.empty = true;
      rows[key] = g;
    }
  std::vector<GroupStats> out;
  for (auto& [key, g] : rows)
    out.push_back(g);
  return out;
}

std::string group_stats_json(const std::vector<GroupStats>& stats) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  auto summary = [](const Summary& s) {
    return nlohmann::ordered_json{{"n", s.n}, {"mean", s.mean}, {"median", s.median}};
  };
  for (const auto& g : stats)
    j.push_back({{"group", g.key.label()},
                 {"count", g.count},
                 {"empty", g.empty},
                 {"volume", summary(g.volume)},
                 {"kfh_rank", summary(g.kfh_rank)},
                 {"determinant", summary(g.determinant)}});
  return j.dump(2) + "\n";
}

std::string group_stats_csv(const std::vector<GroupStats>& stats) {
  std::string out = "c,count,volume_mean,volume_median,kfh_rank_mean,kfh_rank_median,"
                    "determinant_mean,determinant_median\n";
  char buf[512];
  for (const auto& g : stats) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  g.key.label().c_str(), g.count, g.volume.mean, g.volume.median,
                  g.kfh_rank.mean, g.kfh_rank.median, g.determinant.mean, g.determinant.median);
    out += buf;
  }
  return out;
}

// --------------------------------------------------------------- histogram

Histogram histogram_pdf(std::span<const double> values, const HistogramRule& rule) {
  if (values.size() < 2)
    fail(ErrorCode::TooFewPoints, "histogram needs at least two values");
  for (double v : values)
    if (!std::isfinite(v))
      fail(ErrorCode::InvalidArgument, "histogram values must be finite");
  auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  double lo = rule.lo.value_or(*mn);
  double hi = rule.hi.value_or(*mx);
  if (!(hi > lo))
    fail(ErrorCode::DegenerateRange, "histogram range is empty (all values equal)");

  std::vector<double> in_range;
  in_range.reserve(values.size());
  for (double v : values)
    if (v >= lo && v <= hi)
      in_range.push_back(v);
  const double n = static_cast<double>(in_range.size());
  if (in_range.empty())
    fail(ErrorCode::EmptyInput, "no values inside the histogram range");

  std::size_t bins = 0;
  Histogram h;
  using Kind = HistogramRule::Kind;
  Kind kind = rule.kind;
  double fd_width = 0;
  if (kind == Kind::FreedmanDiaconis) {
    std::vector<double> v = in_range;
    auto q = [&](double p) {
      std::size_t k = static_cast<std::size_t>(p * static_cast<double>(v.size() - 1));
      std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
      return v[k];
    };
    double iqr = q(0.75) - q(0.25);
    fd_width = 2.0 * iqr / std::cbrt(n);
    if (!(fd_width > 0))
      kind = Kind::Sturges;
  }
  switch (kind) {
  case Kind::FixedCount:
    bins = rule.bins;
    if (bins == 0)
      fail(ErrorCode::InvalidArgument, "histogram needs at least one bin");
    break;
  case Kind::Sturges:
    bins = static_cast<std::size_t>(std::ceil(std::log2(n))) + 1;
    break;
  case Kind::FreedmanDiaconis:
    bins = static_cast<std::size_t>(std::ceil((hi - lo) / fd_width));
    break;
  case Kind::UnitWidth: {
    // Bins of width 1 centred on the integers.
    lo = std::round(lo) - 0.5;
    hi = std::round(hi) + 0.5;
    bins = static_cast<std::size_t>(std::llround(hi - lo));
    break;
  }
  }
  constexpr std::size_t kMaxBins = 1'000'000;
  if (bins > kMaxBins)
    fail(ErrorCode::InvalidArgument, "histogram would need " + std::to_string(bins) + " bins");
  bins = std::max<std::size_t>(bins, 1);

  const double width = (hi - lo) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i)
    h.edges[i] = lo + width * static_cast<double>(i);
  h.edges[bins] = hi;
  h.counts.assign(bins, 0);
  for (double v : in_range) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    if (b >= bins)
      b = bins - 1;
    // Exact edge placement: a value sitting below its computed edge moves down.
    while (b > 0 && v < h.edges[b])
      --b;
    while (b + 1 < bins && v >= h.edges[b + 1])
      ++b;
    ++h.counts[b];
  }
  h.density.resize(bins);
  for (std::size_t i = 0; i < bins; ++i)
    h.density[i] = static_cast<double>(h.counts[i]) / (n * (h.edges[i + 1] - h.edges[i]));
  return h;
}

} // namespace knotscope
