#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "knotscope/dataset.hpp"
#include "knotscope/stats.hpp"

namespace knotscope {

/// Which (c, alternating) groups an analysis covers.
struct GroupFilter {
  enum class Kind { All, Alternating, NonAlternating, Listed } kind = Kind::All;
  std::set<GroupKey> listed;
  std::set<int> crossings; // empty = any

  bool accepts(const GroupKey& key) const;
};

// "all", "alt", "nonalt" or a comma list of labels such as "12a,17n".
GroupFilter parse_group_filter(const std::string& groups, const std::set<int>& crossings = {});
// "12", "12,13", "12..17".
std::set<int> parse_crossing_set(const std::string& text);

// Selected groups, non-alternating first, each in increasing c.
std::vector<GroupKey> selected_groups(const KnotTable& table, const GroupFilter& filter);

enum class YColumn { KfhRank, Determinant };
YColumn parse_y_column(const std::string& text);

struct GroupFit {
  GroupKey key;
  std::optional<LinearFit> fit;
  std::string error; // "TooFewPoints: ..." etc. when fit is absent
};

// x = volume, y = log(column) over hyperbolic records of each group.
std::vector<GroupFit> fit_groups(const KnotTable& table, YColumn y, LogBase base,
                                 const GroupFilter& filter, int jobs = 1);
// Columns in the published table order: c, R^2, correlation, slope, slope
// error, intercept, intercept error; then n and error.
std::string fits_csv(const std::vector<GroupFit>& fits);
std::string fits_json(const std::vector<GroupFit>& fits, YColumn y, LogBase base);

struct AMinRow {
  int crossings = 0;
  double a_min = 0.0;
  std::string witness;
  std::size_t n = 0;
};

// Per crossing number, over alternating and non-alternating hyperbolic
// records together: max log(kfh_rank) / volume.
std::vector<AMinRow> a_min_table(const KnotTable& table, LogBase base,
                                 const std::set<int>& crossings = {});
std::string a_min_csv(const std::vector<AMinRow>& rows);
std::string a_min_json(const std::vector<AMinRow>& rows, LogBase base);

// Abscissa used for density curves: raw volume, volume / c, or volume
// divided by the group's largest volume.
enum class XScale { Raw, PerCrossing, UnitMax };
XScale parse_x_scale(const std::string& text);
const char* to_string(XScale s) noexcept;

struct GroupVolumes {
  std::vector<double> x;
  std::vector<std::uint64_t> ranks;
  std::vector<std::size_t> index;
};
GroupVolumes group_volumes(const KnotTable& table, const GroupKey& key, XScale scale);

struct DensityFitRow {
  GroupKey key;
  DensityCurve curve;
  std::optional<SigmoidFit> fit;
  std::string error;
};

std::vector<DensityFitRow> density_fits(const KnotTable& table, std::uint64_t d,
                                        const GroupFilter& filter, XScale scale,
                                        const LMControls& controls = {}, int jobs = 1);
// c, L, L error, k, k error, x0, x0 error, b, b error; then sse,
// iterations, points and error.
std::string density_fits_csv(const std::vector<DensityFitRow>& rows);
std::string density_fits_json(const std::vector<DensityFitRow>& rows, XScale scale);
std::string density_curve_csv(const DensityCurve& curve);

// Shortest round-trip decimal for a double.
std::string format_double(double v);

} // namespace knotscope
