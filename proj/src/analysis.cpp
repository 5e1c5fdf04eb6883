#include <charconv>
#include <cmath>

#include "json.hpp"

#include "knotscope/analysis.hpp"
#include "knotscope/error.hpp"
#include "knotscope/parallel.hpp"

namespace knotscope {

std::string format_double(double v) {
  if (std::isnan(v))
    return "nan";
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

bool GroupFilter::accepts(const GroupKey& key) const {
  if (!crossings.empty() && !crossings.count(key.crossings))
    return false;
  switch (kind) {
  case Kind::All:
    return true;
  case Kind::Alternating:
    return key.alternating;
  case Kind::NonAlternating:
    return !key.alternating;
  case Kind::Listed:
    return listed.count(key) != 0;
  }
  return false;
}

namespace {

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

int to_int(const std::string& s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorCode::ParseError, "not an integer: '" + s + "'");
  return v;
}

} // namespace

GroupFilter parse_group_filter(const std::string& groups, const std::set<int>& crossings) {
  GroupFilter f;
  f.crossings = crossings;
  if (groups.empty() || groups == "all")
    f.kind = GroupFilter::Kind::All;
  else if (groups == "alt" || groups == "alternating")
    f.kind = GroupFilter::Kind::Alternating;
  else if (groups == "nonalt" || groups == "non-alternating")
    f.kind = GroupFilter::Kind::NonAlternating;
  else {
    f.kind = GroupFilter::Kind::Listed;
    for (const auto& label : split_commas(groups)) {
      auto key = parse_group_label(label);
      if (!key)
        fail(ErrorCode::ParseError, "not a group label: '" + label + "'");
      f.listed.insert(*key);
    }
  }
  return f;
}

std::set<int> parse_crossing_set(const std::string& text) {
  std::set<int> out;
  if (text.empty() || text == "all")
    return out;
  for (const auto& part : split_commas(text)) {
    auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.insert(to_int(part));
      continue;
    }
    int lo = to_int(part.substr(0, dots)), hi = to_int(part.substr(dots + 2));
    for (int c = lo; c <= hi; ++c)
      out.insert(c);
  }
  return out;
}

std::vector<GroupKey> selected_groups(const KnotTable& table, const GroupFilter& filter) {
  std::vector<GroupKey> out;
  for (bool alt : {false, true})
    for (const auto& [key, idx] : table.groups())
      if (key.alternating == alt && filter.accepts(key))
        out.push_back(key);
  return out;
}

YColumn parse_y_column(const std::string& text) {
  if (text == "kfh_rank" || text == "rank")
    return YColumn::KfhRank;
  if (text == "determinant" || text == "det")
    return YColumn::Determinant;
  fail(ErrorCode::ParseError, "y column must be kfh_rank or determinant, got '" + text + "'");
}

std::vector<GroupFit> fit_groups(const KnotTable& table, YColumn y, LogBase base,
                                 const GroupFilter& filter, int jobs) {
  auto keys = selected_groups(table, filter);
  std::vector<GroupFit> out(keys.size());
  parallel_for(keys.size(), jobs, [&](std::size_t g) {
    out[g].key = keys[g];
    std::vector<double> xs, ys;
    for (std::size_t i : table.group_indices(keys[g])) {
      if (!(table.volume(i) > 0))
        continue;
      auto v = y == YColumn::KfhRank ? table.kfh_rank(i) : table.determinant(i);
      xs.push_back(table.volume(i));
      ys.push_back(log_in(static_cast<double>(v), base));
    }
    try {
      out[g].fit = linfit(xs, ys);
    } catch (const Error& e) {
      out[g].error = std::string(to_string(e.code())) + ": " + e.what();
    }
  });
  return out;
}

std::string fits_csv(const std::vector<GroupFit>& fits) {
  std::string out = "c,R2,correlation,slope,slope_err,intercept,intercept_err,n,error\n";
  for (const auto& g : fits) {
    out += g.key.label();
    if (g.fit) {
      const auto& f = *g.fit;
      for (double v : {f.r_squared, f.pearson_r, f.slope, f.slope_err, f.intercept, f.intercept_err})
        out += "," + format_double(v);
      out += "," + std::to_string(f.n) + ",\n";
    } else {
      out += ",,,,,,,,\"" + g.error + "\"\n";
    }
  }
  return out;
}

std::string fits_json(const std::vector<GroupFit>& fits, YColumn y, LogBase base) {
  nlohmann::ordered_json j;
  j["y"] = y == YColumn::KfhRank ? "log kfh_rank" : "log determinant";
  j["log_base"] = to_string(base);
  j["fits"] = nlohmann::ordered_json::array();
  for (const auto& g : fits) {
    nlohmann::ordered_json row{{"c", g.key.label()}};
    if (g.fit) {
      const auto& f = *g.fit;
      row["R2"] = f.r_squared;
      row["correlation"] = f.pearson_r;
      row["slope"] = f.slope;
      row["slope_err"] = f.slope_err;
      row["intercept"] = f.intercept;
      row["intercept_err"] = f.intercept_err;
      row["n"] = f.n;
    } else {
      row["error"] = g.error;
    }
    j["fits"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::vector<AMinRow> a_min_table(const KnotTable& table, LogBase base, const std::set<int>& crossings) {
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_c;
  std::map<int, std::vector<std::size_t>> idx_by_c;
  for (const auto& [key, idx] : table.groups()) {
    if (!crossings.empty() && !crossings.count(key.crossings))
      continue;
    auto& [xs, ys] = by_c[key.crossings];
    for (std::size_t i : idx) {
      if (!(table.volume(i) > 0))
        continue;
      xs.push_back(table.volume(i));
      ys.push_back(log_in(static_cast<double>(table.kfh_rank(i)), base));
      idx_by_c[key.crossings].push_back(i);
    }
  }
  std::vector<AMinRow> out;
  for (const auto& [c, pts] : by_c) {
    if (pts.first.empty())
      continue;
    std::size_t k = a_min_index(pts.first, pts.second);
    out.push_back(AMinRow{c, pts.second[k] / pts.first[k], std::string(table.name(idx_by_c[c][k])),
                          pts.first.size()});
  }
  return out;
}

std::string a_min_csv(const std::vector<AMinRow>& rows) {
  std::string out = "c,a_min,witness,n\n";
  for (const auto& r : rows)
    out += std::to_string(r.crossings) + "," + format_double(r.a_min) + "," + r.witness + "," +
           std::to_string(r.n) + "\n";
  return out;
}

std::string a_min_json(const std::vector<AMinRow>& rows, LogBase base) {
  nlohmann::ordered_json j;
  j["log_base"] = to_string(base);
  j["a_min"] = nlohmann::ordered_json::array();
  for (const auto& r : rows)
    j["a_min"].push_back({{"c", r.crossings}, {"a_min", r.a_min}, {"witness", r.witness}, {"n", r.n}});
  return j.dump(2) + "\n";
}

XScale parse_x_scale(const std::string& text) {
  if (text == "raw" || text == "volume")
    return XScale::Raw;
  if (text == "per-crossing" || text == "per_crossing")
    return XScale::PerCrossing;
  if (text == "unit-max" || text == "unit_max")
    return XScale::UnitMax;
  fail(ErrorCode::ParseError, "x scale must be raw, per-crossing or unit-max, got '" + text + "'");
}

const char* to_string(XScale s) noexcept {
  switch (s) {
  case XScale::Raw:
    return "raw";
  case XScale::PerCrossing:
    return "per-crossing";
  case XScale::UnitMax:
    return "unit-max";
  }
  return "raw";
}

GroupVolumes group_volumes(const KnotTable& table, const GroupKey& key, XScale scale) {
  GroupVolumes g;
  double vmax = 0;
  for (std::size_t i : table.group_indices(key)) {
    if (!(table.volume(i) > 0))
      continue;
    g.x.push_back(table.volume(i));
    g.ranks.push_back(table.kfh_rank(i));
    g.index.push_back(i);
    vmax = std::max(vmax, table.volume(i));
  }
  const double div = scale == XScale::PerCrossing ? static_cast<double>(key.crossings)
                     : scale == XScale::UnitMax   ? vmax
                                                  : 1.0;
  if (div != 1.0 && div > 0)
    for (double& x : g.x)
      x /= div;
  return g;
}

std::vector<DensityFitRow> density_fits(const KnotTable& table, std::uint64_t d,
                                        const GroupFilter& filter, XScale scale,
                                        const LMControls& controls, int jobs) {
  auto keys = selected_groups(table, filter);
  std::vector<DensityFitRow> out(keys.size());
  parallel_for(keys.size(), jobs, [&](std::size_t g) {
    auto& row = out[g];
    row.key = keys[g];
    try {
      auto vols = group_volumes(table, keys[g], scale);
      row.curve = density_f(vols.x, vols.ranks, d);
      row.fit = sigmoid_fit(row.curve, std::nullopt, controls);
    } catch (const Error& e) {
      row.error = std::string(to_string(e.code())) + ": " + e.what();
    }
  });
  return out;
}

std::string density_fits_csv(const std::vector<DensityFitRow>& rows) {
  std::string out = "c,L,L_err,k,k_err,x0,x0_err,b,b_err,sse,iterations,points,error\n";
  for (const auto& r : rows) {
    out += r.key.label();
    if (r.fit) {
      const auto& p = r.fit->params;
      const auto& e = r.fit->errors;
      for (double v : {p.L, e.L, p.k, e.k, p.x0, e.x0, p.b, e.b, r.fit->sse})
        out += "," + format_double(v);
      out += "," + std::to_string(r.fit->iterations) + "," + std::to_string(r.curve.x.size()) + ",\n";
    } else {
      out += ",,,,,,,,,,," + std::to_string(r.curve.x.size()) + ",\"" + r.error + "\"\n";
    }
  }
  return out;
}

std::string density_fits_json(const std::vector<DensityFitRow>& rows, XScale scale) {
  nlohmann::ordered_json j;
  j["x_scale"] = to_string(scale);
  j["fits"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row{{"c", r.key.label()}, {"d", r.curve.cutoff}, {"points", r.curve.x.size()}};
    if (r.fit) {
      const auto& p = r.fit->params;
      const auto& e = r.fit->errors;
      row["L"] = p.L;
      row["L_err"] = e.L;
      row["k"] = p.k;
      row["k_err"] = e.k;
      row["x0"] = p.x0;
      row["x0_err"] = e.x0;
      row["b"] = p.b;
      row["b_err"] = e.b;
      row["sse"] = r.fit->sse;
      row["iterations"] = r.fit->iterations;
      row["converged"] = r.fit->converged;
    } else {
      row["error"] = r.error;
    }
    j["fits"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::string density_curve_csv(const DensityCurve& curve) {
  std::string out = "x,f\n";
  for (std::size_t i = 0; i < curve.x.size(); ++i)
    out += format_double(curve.x[i]) + "," + format_double(curve.f[i]) + "\n";
  out += "inf," + format_double(curve.f_infinity) + "\n";
  return out;
}

} // namespace knotscope
