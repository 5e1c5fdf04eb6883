#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knotscope/bigint.hpp"
#include "knotscope/diagram.hpp"

namespace knotscope {

/// Pretzel knot P(p, q, r): three vertical twist columns with p, q and r
/// signed half twists, joined side by side.
struct PretzelSpec {
  int p = 0;
  int q = 0;
  int r = 0;
};

struct TwistSpec {
  int n = 1;
};

// Throws NotAKnot when the parities give a link (two or more even columns).
Diagram pretzel(const PretzelSpec& spec);

// n half twists plus a two-crossing clasp, built as P(1, 1, n). det = 2n + 1.
Diagram twist(const TwistSpec& spec);

// |pq + qr + rp|.
BigInt pretzel_det_formula(const PretzelSpec& spec);
inline BigInt twist_det_formula(int n) { return BigInt(2) * n + 1; }

struct FamilyRow {
  std::string label;   // e.g. "twist(4)" or "P(3,3,2)"
  int parameter = 0;   // the varying parameter
  int crossings = 0;
  std::optional<BigInt> determinant; // absent when the routes disagree
  BigInt goeritz;
  BigInt alexander;
  std::optional<BigInt> jones;
  BigInt formula;
  bool match = false;
  std::string error; // non-empty when construction or evaluation failed
};

struct FamilyReport {
  std::string spec;
  std::vector<FamilyRow> rows;

  bool all_match() const; // vacuously true for an empty range
  int match_count() const;
  std::string to_csv() const;
  std::string to_json() const;
};

// Family specs:
//   twist:A..B[:even|:odd]     twist knots for n in A..B
//   pretzel:P,Q,R[:even|:odd]  one of P, Q, R may be a range A..B
// An empty range (A > B) yields an empty report.
FamilyReport family_report(std::string_view spec);

} // namespace knotscope
