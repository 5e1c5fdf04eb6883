#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "knotscope/conjectures.hpp"

namespace knotscope {

double GroupCheck::fraction_strict() const {
  return total == 0 ? 1.0 : static_cast<double>(satisfied_strict) / static_cast<double>(total);
}

double GroupCheck::fraction_nonstrict() const {
  return total == 0 ? 1.0 : static_cast<double>(satisfied_nonstrict) / static_cast<double>(total);
}

bool ConjectureReport::vacuous() const {
  for (const auto& g : groups)
    if (g.total > 0)
      return false;
  return true;
}

std::size_t ConjectureReport::violations_strict() const {
  std::size_t n = 0;
  for (const auto& g : groups)
    n += g.violations_strict();
  return n;
}

std::string ConjectureReport::to_json() const {
  nlohmann::ordered_json j;
  j["check"] = check;
  j["params"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params)
    j["params"][k] = std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(format_double(v));
  j["groups"] = nlohmann::ordered_json::array();
  for (const auto& g : groups) {
    nlohmann::ordered_json row{{"c", g.key.label()},
                               {"total", g.total},
                               {"fraction_strict", g.fraction_strict()},
                               {"fraction_nonstrict", g.fraction_nonstrict()},
                               {"violations_strict", g.violations_strict()},
                               {"equalities", g.equalities}};
    row["witnesses"] = nlohmann::ordered_json::array();
    for (const auto& w : g.witnesses)
      row["witnesses"].push_back(
          {{"name", w.name}, {"x", w.x}, {"lhs", w.lhs}, {"bound", w.bound}, {"excess", w.excess}});
    j["groups"].push_back(std::move(row));
  }
  j["monotone_trend"] = nlohmann::ordered_json::object();
  for (const auto& [alt, flag] : monotone_trend)
    j["monotone_trend"][alt ? "alternating" : "non-alternating"] = flag;
  j["vacuous"] = vacuous();
  return j.dump(2) + "\n";
}

std::string ConjectureReport::to_csv() const {
  std::string out = "check,c,total,fraction_strict,fraction_nonstrict,violations_strict,equalities,"
                    "worst_name,worst_excess\n";
  for (const auto& g : groups) {
    out += check + "," + g.key.label() + "," + std::to_string(g.total) + "," +
           format_double(g.fraction_strict()) + "," + format_double(g.fraction_nonstrict()) + "," +
           std::to_string(g.violations_strict()) + "," + std::to_string(g.equalities) + ",";
    if (!g.witnesses.empty())
      out += g.witnesses.front().name + "," + format_double(g.witnesses.front().excess);
    else
      out += ",";
    out += "\n";
  }
  return out;
}

namespace {

class GroupAccumulator {
public:
  explicit GroupAccumulator(GroupKey key) { g_.key = key; }

  void add(std::string_view name, double x, double lhs, double bound) {
    const double excess = lhs - bound;
    const double tol =
        std::isfinite(bound) ? kEqualityTolerance * std::max(1.0, std::fabs(bound)) : 0.0;
    ++g_.total;
    const bool equal = std::fabs(excess) <= tol;
    if (equal)
      ++g_.equalities;
    if (excess < -tol)
      ++g_.satisfied_strict;
    if (excess <= tol)
      ++g_.satisfied_nonstrict;
    auto worse = [](const Witness& a, const Witness& b) {
      return a.excess > b.excess || (a.excess == b.excess && a.name < b.name);
    };
    Witness w{std::string(name), x, lhs, bound, excess};
    auto& ws = g_.witnesses;
    if (ws.size() < kMaxWitnesses || worse(w, ws.back())) {
      ws.insert(std::upper_bound(ws.begin(), ws.end(), w, worse), std::move(w));
      if (ws.size() > kMaxWitnesses)
        ws.pop_back();
    }
  }

  GroupCheck take() { return std::move(g_); }

private:
  GroupCheck g_;
};

void finish(ConjectureReport& r) {
  for (bool alt : {false, true}) {
    std::vector<const GroupCheck*> seq;
    for (const auto& g : r.groups)
      if (g.key.alternating == alt && g.total > 0)
        seq.push_back(&g);
    if (seq.empty())
      continue;
    std::sort(seq.begin(), seq.end(),
              [](const GroupCheck* a, const GroupCheck* b) { return a->key.crossings < b->key.crossings; });
    bool mono = true;
    for (std::size_t i = 1; i < seq.size(); ++i)
      if (seq[i]->fraction_strict() < seq[i - 1]->fraction_strict())
        mono = false;
    r.monotone_trend[alt] = mono;
  }
}

template <class BoundFn>
ConjectureReport scan(const KnotTable& table, const GroupFilter& filter, std::string check,
                      BoundFn&& per_record) {
  ConjectureReport r;
  r.check = std::move(check);
  for (const auto& key : selected_groups(table, filter)) {
    GroupAccumulator acc(key);
    if (!per_record(key, acc))
      continue;
    r.groups.push_back(acc.take());
  }
  finish(r);
  return r;
}

} // namespace

ConjectureReport check_rank_volume(const KnotTable& table, const std::map<GroupKey, double>& a,
                                   LogBase base, const GroupFilter& filter) {
  auto r = scan(table, filter, "rank-volume", [&](const GroupKey& key, GroupAccumulator& acc) {
    auto it = a.find(key);
    if (it == a.end())
      return false;
    for (std::size_t i : table.group_indices(key)) {
      double v = table.volume(i);
      if (!(v > 0))
        continue;
      acc.add(table.name(i), v, log_in(static_cast<double>(table.kfh_rank(i)), base), it->second * v);
    }
    return true;
  });
  if (a.size() == 1)
    r.params["a"] = a.begin()->second;
  return r;
}

ConjectureReport check_rank_volume(const KnotTable& table, double a, LogBase base,
                                   const GroupFilter& filter) {
  std::map<GroupKey, double> per;
  for (const auto& key : selected_groups(table, filter))
    per[key] = a;
  auto r = check_rank_volume(table, per, base, filter);
  r.params.clear();
  r.params["a"] = a;
  return r;
}

ConjectureReport check_det_volume(const KnotTable& table, double a, double b, LogBase base,
                                  const GroupFilter& filter) {
  auto r = scan(table, filter, "det-volume", [&](const GroupKey& key, GroupAccumulator& acc) {
    for (std::size_t i : table.group_indices(key)) {
      double v = table.volume(i);
      if (!(v > 0))
        continue;
      acc.add(table.name(i), v, log_in(static_cast<double>(table.determinant(i)), base), a * v + b);
    }
    return true;
  });
  r.params["a"] = a;
  r.params["b"] = b;
  return r;
}

ConjectureReport check_density_bound(const KnotTable& table, std::uint64_t d,
                                     const std::map<GroupKey, SigmoidParams>& params, double margin,
                                     XScale scale, const GroupFilter& filter) {
  auto r = scan(table, filter, "density", [&](const GroupKey& key, GroupAccumulator& acc) {
    auto it = params.find(key);
    if (it == params.end())
      return false;
    auto vols = group_volumes(table, key, scale);
    if (vols.x.empty())
      return true;
    DensityCurve curve = density_f(vols.x, vols.ranks, d);
    for (std::size_t i = 0; i < curve.x.size(); ++i)
      acc.add("x=" + format_double(curve.x[i]), curve.x[i], curve.f[i],
              sigmoid_eval(it->second, curve.x[i]) + margin);
    return true;
  });
  r.params["d"] = static_cast<double>(d);
  r.params["margin"] = margin;
  return r;
}

ConjectureReport check_stoimenow(const KnotTable& table, const GroupFilter& filter) {
  auto r = scan(table, filter, "stoimenow", [&](const GroupKey& key, GroupAccumulator& acc) {
    if (!key.alternating)
      return false;
    for (std::size_t i : table.group_indices(key)) {
      double v = table.volume(i);
      if (!(v > 0))
        continue;
      acc.add(table.name(i), v, 2.0 * std::pow(kStoimenowBase, v),
              static_cast<double>(table.determinant(i)));
    }
    return true;
  });
  r.params["base"] = kStoimenowBase;
  return r;
}

} // namespace knotscope
