#pragma once

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace knotscope {

/// Dowker-Thistlethwaite code. Entry i is the even visit paired with odd
/// visit 2i+1; a negative entry means the even-numbered visit passes under.
class DTCode {
public:
  DTCode() = default; // the 0-crossing unknot
  explicit DTCode(std::vector<int> values);

  std::span<const int> values() const noexcept { return values_; }
  int crossings() const noexcept { return static_cast<int>(values_.size()); }
  bool empty() const noexcept { return values_.empty(); }
  bool all_positive() const noexcept;

  // Space separated, e.g. "4 6 2".
  std::string str() const;

  friend bool operator==(const DTCode&, const DTCode&) = default;

private:
  std::vector<int> values_;
};

// Signed integers separated by whitespace and/or commas, optionally wrapped
// in (), [] or {}.
DTCode parse_dt(std::string_view text);

struct GaussEntry {
  int crossing = 0; // 1-based label
  bool over = false;
  int sign = 0;     // +1 / -1 when known, 0 otherwise

  friend bool operator==(const GaussEntry&, const GaussEntry&) = default;
};

/// Double-occurrence crossing sequence along the knot.
class GaussCode {
public:
  GaussCode() = default;
  explicit GaussCode(std::vector<GaussEntry> entries);

  std::span<const GaussEntry> entries() const noexcept { return entries_; }
  int crossings() const noexcept { return static_cast<int>(entries_.size() / 2); }
  std::size_t size() const noexcept { return entries_.size(); }

  // Signed labels: +k for an over pass, -k for an under pass.
  std::string str() const;

  friend bool operator==(const GaussCode&, const GaussCode&) = default;

private:
  std::vector<GaussEntry> entries_;
};

// "-1 2 -3 1 -2 3": negative means an under pass. Labels may be any
// distinct positive integers; they are renumbered 1..c by first appearance.
GaussCode parse_gauss(std::string_view text);

GaussCode dt_to_gauss(const DTCode& code);

// DT code read from a Gauss sequence starting at its first entry. Throws
// NonRealizable when some crossing is visited twice with the same parity.
DTCode gauss_to_dt(const GaussCode& gauss);

// Smallest DT code over every starting point and both traversal directions.
// Entries compare by magnitude first, positive before negative.
DTCode canonical_dt(const GaussCode& gauss);
DTCode canonical_dt(const DTCode& code);

// Ordering used by canonical_dt.
bool dt_less(const DTCode& a, const DTCode& b);

} // namespace knotscope
