#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "knotscope/codes.hpp"
#include "knotscope/config.hpp"

namespace knotscope {

/// (crossing number, alternating) group, printed as "12a" / "12n".
struct GroupKey {
  int crossings = 0;
  bool alternating = false;

  std::string label() const;
  auto operator<=>(const GroupKey&) const = default;
};

// "12a", "17n"; nullopt when the text is not a group label.
std::optional<GroupKey> parse_group_label(std::string_view text);

struct KnotRecord {
  std::string name;
  int crossings = 0;
  bool alternating = false;
  std::optional<DTCode> dt;
  double volume = std::numeric_limits<double>::quiet_NaN(); // NaN when missing
  std::uint64_t kfh_rank = 0;
  std::uint64_t determinant = 0;

  // Only hyperbolic records (finite positive volume) enter fits.
  bool hyperbolic() const noexcept { return volume > 0.0; }
};

/// Validated records in columnar storage. DT codes are kept as packed
/// signed bytes so that millions of 17-crossing rows stay affordable.
class KnotTable {
public:
  void add(const KnotRecord& r, std::uint64_t source_row = 0);
  std::size_t size() const noexcept { return volume_.size(); }
  bool empty() const noexcept { return size() == 0; }

  KnotRecord record(std::size_t i) const;
  std::string_view name(std::size_t i) const;
  int crossings(std::size_t i) const { return crossings_[i]; }
  bool alternating(std::size_t i) const { return alternating_[i] != 0; }
  double volume(std::size_t i) const { return volume_[i]; }
  std::uint64_t kfh_rank(std::size_t i) const { return kfh_rank_[i]; }
  std::uint64_t determinant(std::size_t i) const { return determinant_[i]; }
  std::optional<DTCode> dt(std::size_t i) const;
  std::uint64_t source_row(std::size_t i) const { return source_row_[i]; }
  GroupKey group(std::size_t i) const { return {crossings(i), alternating(i)}; }

  // Group -> record indices in insertion order.
  const std::map<GroupKey, std::vector<std::size_t>>& groups() const noexcept { return groups_; }
  std::span<const std::size_t> group_indices(const GroupKey& key) const;

  // Keep rows whose mask entry is true; indices are renumbered.
  void compact(const std::vector<bool>& keep);

private:
  std::vector<char> names_;
  std::vector<std::size_t> name_offset_{0};
  std::vector<std::int8_t> dt_values_;
  std::vector<std::size_t> dt_offset_{0};
  std::vector<char> has_dt_;
  std::vector<std::uint8_t> crossings_;
  std::vector<char> alternating_;
  std::vector<double> volume_;
  std::vector<std::uint64_t> kfh_rank_;
  std::vector<std::uint64_t> determinant_;
  std::vector<std::uint64_t> source_row_;
  std::map<GroupKey, std::vector<std::size_t>> groups_;
};

inline constexpr const char* kCanonicalColumns[] = {"name",   "crossings", "alternating", "dt",
                                                    "volume", "kfh_rank",  "determinant"};

enum class QuarantinePolicy { Quarantine, Strict };

struct LoadOptions {
  // canonical column -> header in the file; unmapped columns use their
  // canonical name.
  std::map<std::string, std::string> header_map;
  QuarantinePolicy policy = QuarantinePolicy::Quarantine;
  // Derive crossings / alternating from names like "12a_34" when those
  // columns are absent.
  bool derive_from_name = true;
  bool keep_dt = true;
  char delimiter = ',';
  std::set<int> crossings; // empty = all
};

// Reads "column.<canonical> = <header>" (also "columns." or a bare canonical
// key), "policy", "derive_from_name", "delimiter" and "crossings".
LoadOptions load_options_from_config(const KeyValueConfig& cfg, LoadOptions base = {});

struct QuarantineEntry {
  std::string file;
  std::uint64_t row = 0; // 1-based line number, header is line 1
  std::string name;
  std::string reason;    // one of the reason strings below
  std::string detail;
};

inline constexpr const char* kReasonMalformed = "malformed row";
inline constexpr const char* kReasonParity = "determinant parity";
inline constexpr const char* kReasonRankBelowDet = "rank below determinant";
inline constexpr const char* kReasonAltRank = "alternating rank mismatch";
inline constexpr const char* kReasonDuplicate = "duplicate name";
inline constexpr const char* kReasonInvalidDt = "invalid dt";
inline constexpr const char* kReasonDtLength = "dt length";

struct ValidationReport {
  static constexpr std::size_t kMaxListed = 1000;

  std::vector<std::string> files;
  std::uint64_t rows_read = 0;
  std::uint64_t loaded = 0;
  std::uint64_t quarantined = 0;
  std::uint64_t filtered = 0;          // skipped by the crossings filter
  std::uint64_t nonhyperbolic = 0;     // loaded but volume missing or <= 0
  std::map<std::string, std::uint64_t> reasons;
  std::vector<QuarantineEntry> entries; // first kMaxListed
  std::map<GroupKey, std::uint64_t> group_counts;

  void quarantine(QuarantineEntry e);
  std::string to_json() const;
};

struct LoadResult {
  KnotTable table;
  ValidationReport report;
};

// Streams the files row by row. Invariant: loaded + quarantined + filtered
// = rows_read. Errors: Io, EmptyFile, MissingColumn; MalformedRow (with the
// row number) and the other quarantine reasons become errors under Strict.
LoadResult load_csv(const std::vector<std::string>& paths, const LoadOptions& options = {});

// Checks a parsed record against the per-record knot invariants; returns a
// reason string, or nullptr when the record is acceptable.
const char* record_violation(const KnotRecord& r, std::string* detail);

// Quote-aware split of one CSV line.
std::vector<std::string> split_csv_line(std::string_view line, char delimiter = ',');

// -------------------------------------------------------------- sampling

enum class SampleStatus { Match, Mismatch, RealizationFailure, Disagreement, NoDt, Error };
const char* to_string(SampleStatus s) noexcept;

struct SampleEntry {
  std::string name;
  std::uint64_t stored = 0;
  std::optional<std::uint64_t> computed;
  SampleStatus status = SampleStatus::Error;
  std::string detail;
};

struct SampleReport {
  std::vector<SampleEntry> entries;
  std::size_t candidates = 0;
  std::uint64_t seed = 0;

  std::size_t count(SampleStatus s) const;
  std::string to_json() const;
};

// Draws k records (without replacement, deterministic in seed) among those
// with a DT code and, when `crossings` is non-empty, the listed crossing
// numbers; realizes each code and compares the consensus determinant with
// the stored column. Work fans out over `jobs` threads.
SampleReport verify_sample(const KnotTable& table, std::size_t k, std::uint64_t seed = 1,
                           const std::set<int>& crossings = {}, int jobs = 1);

// ------------------------------------------------------------ group stats

struct Summary {
  double mean = 0.0;
  double median = 0.0;
  std::size_t n = 0;
};

struct GroupStats {
  GroupKey key;
  std::size_t count = 0;
  bool empty = false; // EmptyGroup flag for a requested group with no rows
  Summary volume;     // hyperbolic records only
  Summary kfh_rank;
  Summary determinant;
};

// One row per group present in the table, plus flagged rows for requested
// groups that are absent. Throws EmptyInput on an empty table.
std::vector<GroupStats> group_stats(const KnotTable& table,
                                    const std::vector<GroupKey>& requested = {});
std::string group_stats_json(const std::vector<GroupStats>& stats);
std::string group_stats_csv(const std::vector<GroupStats>& stats);

// -------------------------------------------------------------- histogram

struct HistogramRule {
  enum class Kind { FixedCount, Sturges, FreedmanDiaconis, UnitWidth } kind = Kind::Sturges;
  std::size_t bins = 10;         // FixedCount only
  std::optional<double> lo, hi;  // range override
};

struct Histogram {
  std::vector<double> edges;     // bins + 1 increasing edges
  std::vector<std::uint64_t> counts;
  std::vector<double> density;   // count / (n * width); sum(density * width) = 1

  std::size_t bins() const noexcept { return counts.size(); }
};

// Throws TooFewPoints (< 2 values), InvalidArgument (non-finite), or
// DegenerateRange (all values equal).
Histogram histogram_pdf(std::span<const double> values, const HistogramRule& rule = {});

} // namespace knotscope
