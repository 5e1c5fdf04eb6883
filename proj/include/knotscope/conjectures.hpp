#pragma once

#include <map>
#include <string>
#include <vector>

#include "knotscope/analysis.hpp"
#include "knotscope/dataset.hpp"
#include "knotscope/stats.hpp"

namespace knotscope {

// Every check is an inequality lhs < bound per item. excess = lhs - bound.
// Within kEqualityTolerance * max(1, |bound|) of zero counts as equality,
// which fails the strict reading and passes the non-strict one.
inline constexpr double kEqualityTolerance = 1e-12;
inline constexpr std::size_t kMaxWitnesses = 10;

struct Witness {
  std::string name;
  double x = 0.0;      // volume (or density abscissa)
  double lhs = 0.0;
  double bound = 0.0;
  double excess = 0.0;
};

struct GroupCheck {
  GroupKey key;
  std::size_t total = 0;
  std::size_t satisfied_strict = 0;
  std::size_t satisfied_nonstrict = 0;
  std::size_t equalities = 0;
  std::vector<Witness> witnesses; // largest excess first

  // Vacuously 1 for an empty group.
  double fraction_strict() const;
  double fraction_nonstrict() const;
  std::size_t violations_strict() const { return total - satisfied_strict; }
};

struct ConjectureReport {
  std::string check;
  std::map<std::string, double> params;
  std::vector<GroupCheck> groups;
  // Per alternating flag: strict fraction non-decreasing in c.
  std::map<bool, bool> monotone_trend;

  bool vacuous() const;
  std::size_t violations_strict() const;
  std::string to_json() const;
  std::string to_csv() const;
};

// log(kfh_rank) < a * volume over hyperbolic records.
ConjectureReport check_rank_volume(const KnotTable& table, double a, LogBase base = LogBase::E,
                                   const GroupFilter& filter = {});
// Per-group slope; groups absent from the map are skipped.
ConjectureReport check_rank_volume(const KnotTable& table, const std::map<GroupKey, double>& a,
                                   LogBase base = LogBase::E, const GroupFilter& filter = {});

// log(determinant) < a * volume + b.
ConjectureReport check_det_volume(const KnotTable& table, double a, double b,
                                  LogBase base = LogBase::E, const GroupFilter& filter = {});

// f(x) < g(x) + margin at every density breakpoint. Groups without
// parameters are skipped.
ConjectureReport check_density_bound(const KnotTable& table, std::uint64_t d,
                                     const std::map<GroupKey, SigmoidParams>& params, double margin,
                                     XScale scale = XScale::Raw, const GroupFilter& filter = {});

// 2 * 1.0355^volume <= determinant over alternating hyperbolic records.
inline constexpr double kStoimenowBase = 1.0355;
ConjectureReport check_stoimenow(const KnotTable& table, const GroupFilter& filter = {});

} // namespace knotscope
