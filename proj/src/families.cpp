#include <charconv>
#include <functional>
#include <sstream>

#include "json.hpp"

#include "knotscope/error.hpp"
#include "knotscope/families.hpp"
#include "knotscope/invariants.hpp"

namespace knotscope {

namespace {

struct Column {
  int top_left, top_right, bottom_left, bottom_right;
};

// Legs are counterclockwise SW, SE, NE, NW. Stacking NW_i on SW_{i+1} and
// NE_i on SE_{i+1} makes the strand alternate over/under up the column.
Column twist_column(PlanarBuilder& b, int half_twists) {
  if (half_twists == 0) {
    Column col{b.add_point(), b.add_point(), b.add_point(), b.add_point()};
    b.wire(col.top_left, col.bottom_left);
    b.wire(col.top_right, col.bottom_right);
    return col;
  }
  const bool over_02 = half_twists > 0;
  const int m = half_twists > 0 ? half_twists : -half_twists;
  int first = -1;
  int prev = -1;
  for (int i = 0; i < m; ++i) {
    int x = b.add_crossing(over_02);
    if (prev >= 0) {
      b.wire(b.leg(prev, 3), b.leg(x, 0));
      b.wire(b.leg(prev, 2), b.leg(x, 1));
    } else {
      first = x;
    }
    prev = x;
  }
  return Column{b.leg(prev, 3), b.leg(prev, 2), b.leg(first, 0), b.leg(first, 1)};
}

} // namespace

Diagram pretzel(const PretzelSpec& spec) {
  const int t[3] = {spec.p, spec.q, spec.r};
  if (spec.p == 0 && spec.q == 0 && spec.r == 0)
    fail(ErrorCode::InvalidArgument, "pretzel needs at least one crossing");
  int even = 0;
  for (int v : t)
    even += (v % 2 == 0);
  if (even >= 2)
    fail(ErrorCode::NotAKnot, "P(" + std::to_string(spec.p) + "," + std::to_string(spec.q) + "," +
                                  std::to_string(spec.r) + ") is a link");

  PlanarBuilder b;
  Column cols[3];
  for (int j = 0; j < 3; ++j)
    cols[j] = twist_column(b, t[j]);
  for (int j = 0; j + 1 < 3; ++j) {
    b.wire(cols[j].top_right, cols[j + 1].top_left);
    b.wire(cols[j].bottom_right, cols[j + 1].bottom_left);
  }
  b.wire(cols[0].top_left, cols[2].top_right);
  b.wire(cols[0].bottom_left, cols[2].bottom_right);
  return b.build();
}

Diagram twist(const TwistSpec& spec) {
  if (spec.n < 1)
    fail(ErrorCode::InvalidArgument, "twist knot needs n >= 1");
  return pretzel(PretzelSpec{1, 1, spec.n});
}

BigInt pretzel_det_formula(const PretzelSpec& s) {
  BigInt p = s.p, q = s.q, r = s.r;
  BigInt v = p * q + q * r + r * p;
  return v < 0 ? BigInt(-v) : v;
}

bool FamilyReport::all_match() const {
  for (const auto& row : rows)
    if (!row.match)
      return false;
  return true;
}

int FamilyReport::match_count() const {
  int n = 0;
  for (const auto& row : rows)
    n += row.match;
  return n;
}

std::string FamilyReport::to_csv() const {
  std::ostringstream os;
  os << "family,parameter,crossings,determinant,goeritz,alexander,jones,formula,match\n";
  for (const auto& r : rows) {
    os << r.label << ',' << r.parameter << ',' << r.crossings << ','
       << (r.determinant ? r.determinant->str() : "") << ',' << r.goeritz << ',' << r.alexander
       << ',' << (r.jones ? r.jones->str() : "") << ',' << r.formula << ',' << (r.match ? 1 : 0)
       << '\n';
  }
  return os.str();
}

std::string FamilyReport::to_json() const {
  nlohmann::ordered_json j;
  j["spec"] = spec;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    row["family"] = r.label;
    row["parameter"] = r.parameter;
    row["crossings"] = r.crossings;
    row["determinant"] = r.determinant ? nlohmann::ordered_json(r.determinant->str()) : nullptr;
    row["goeritz"] = r.goeritz.str();
    row["alexander"] = r.alexander.str();
    row["jones"] = r.jones ? nlohmann::ordered_json(r.jones->str()) : nullptr;
    row["formula"] = r.formula.str();
    row["match"] = r.match;
    if (!r.error.empty())
      row["error"] = r.error;
    j["rows"].push_back(std::move(row));
  }
  j["matches"] = match_count();
  j["total"] = rows.size();
  j["all_match"] = all_match();
  return j.dump(2) + "\n";
}

namespace {

int parse_int(std::string_view s, std::string_view spec) {
  int v = 0;
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorCode::ParseError, "bad integer '" + std::string(s) + "' in family spec '" +
                                    std::string(spec) + "'");
  return v;
}

struct Range {
  int lo = 0, hi = 0;
  bool is_range = false;
};

Range parse_range(std::string_view s, std::string_view spec) {
  auto dots = s.find("..");
  if (dots == std::string_view::npos) {
    int v = parse_int(s, spec);
    return {v, v, false};
  }
  return {parse_int(s.substr(0, dots), spec), parse_int(s.substr(dots + 2), spec), true};
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos
                                                                 : pos - start));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

FamilyRow evaluate(std::string label, int parameter, const BigInt& formula,
                   const std::function<Diagram()>& make) {
  FamilyRow row;
  row.label = std::move(label);
  row.parameter = parameter;
  row.formula = formula;
  try {
    Diagram d = make();
    row.crossings = d.crossing_count();
    DeterminantRoutes routes = determinant_routes(d);
    row.goeritz = routes.goeritz;
    row.alexander = routes.alexander;
    row.jones = routes.jones;
    if (routes.agree())
      row.determinant = routes.goeritz;
    else
      row.error = "routes disagree: " + routes.str();
    row.match = row.determinant && *row.determinant == formula;
  } catch (const Error& e) {
    row.error = std::string(to_string(e.code())) + ": " + e.what();
  }
  return row;
}

} // namespace

FamilyReport family_report(std::string_view spec) {
  FamilyReport report;
  report.spec = std::string(spec);
  auto parts = split(spec, ':');
  if (parts.size() < 2 || parts.size() > 3)
    fail(ErrorCode::ParseError, "family spec must be kind:args[:even|:odd], got '" +
                                    std::string(spec) + "'");
  int parity = -1;
  if (parts.size() == 3) {
    if (parts[2] == "even")
      parity = 0;
    else if (parts[2] == "odd")
      parity = 1;
    else
      fail(ErrorCode::ParseError, "unknown parity filter '" + std::string(parts[2]) + "'");
  }
  auto keep = [&](int v) { return parity < 0 || ((v % 2 + 2) % 2) == parity; };

  if (parts[0] == "twist") {
    Range r = parse_range(parts[1], spec);
    for (int n = r.lo; n <= r.hi; ++n) {
      if (!keep(n))
        continue;
      report.rows.push_back(evaluate("twist(" + std::to_string(n) + ")", n, twist_det_formula(n),
                                     [n] { return twist(TwistSpec{n}); }));
    }
    return report;
  }
  if (parts[0] == "pretzel") {
    auto fields = split(parts[1], ',');
    if (fields.size() != 3)
      fail(ErrorCode::ParseError, "pretzel spec needs three comma-separated parameters");
    Range ranges[3];
    int varying = -1;
    for (int i = 0; i < 3; ++i) {
      ranges[i] = parse_range(fields[i], spec);
      if (ranges[i].is_range) {
        if (varying >= 0)
          fail(ErrorCode::ParseError, "at most one pretzel parameter may be a range");
        varying = i;
      }
    }
    const int v = varying < 0 ? 2 : varying;
    for (int x = ranges[v].lo; x <= ranges[v].hi; ++x) {
      if (!keep(x))
        continue;
      PretzelSpec ps{ranges[0].lo, ranges[1].lo, ranges[2].lo};
      (v == 0 ? ps.p : v == 1 ? ps.q : ps.r) = x;
      std::string label = "P(" + std::to_string(ps.p) + "," + std::to_string(ps.q) + "," +
                          std::to_string(ps.r) + ")";
      report.rows.push_back(
          evaluate(label, x, pretzel_det_formula(ps), [ps] { return pretzel(ps); }));
    }
    return report;
  }
  fail(ErrorCode::ParseError, "unknown family '" + std::string(parts[0]) + "'");
}

} // namespace knotscope
