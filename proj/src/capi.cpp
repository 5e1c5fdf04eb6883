#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <new>
#include <string>

#include "knotscope/knotscope.h"

#include "knotscope/analysis.hpp"
#include "knotscope/config.hpp"
#include "knotscope/conjectures.hpp"
#include "knotscope/dataset.hpp"
#include "knotscope/error.hpp"
#include "knotscope/families.hpp"
#include "knotscope/invariants.hpp"
#include "knotscope/plot.hpp"

using namespace knotscope;

struct ks_diagram {
  Diagram d;
};

struct ks_table {
  KnotTable t;
};

namespace {

thread_local std::string g_last_error;

ks_status status_of(ErrorCode c) {
  switch (c) {
  case ErrorCode::InvalidArgument: return KS_ERR_INVALID_ARGUMENT;
  case ErrorCode::ParseError: return KS_ERR_PARSE;
  case ErrorCode::OddValue: return KS_ERR_ODD_VALUE;
  case ErrorCode::DuplicateMagnitude: return KS_ERR_DUPLICATE_MAGNITUDE;
  case ErrorCode::WrongRange: return KS_ERR_WRONG_RANGE;
  case ErrorCode::InvalidGauss: return KS_ERR_INVALID_GAUSS;
  case ErrorCode::InvalidDiagram: return KS_ERR_INVALID_DIAGRAM;
  case ErrorCode::NonRealizable: return KS_ERR_NON_REALIZABLE;
  case ErrorCode::NotAKnot: return KS_ERR_NOT_A_KNOT;
  case ErrorCode::BudgetExceeded: return KS_ERR_BUDGET_EXCEEDED;
  case ErrorCode::NonSquareNorm: return KS_ERR_NON_SQUARE_NORM;
  case ErrorCode::Disagreement: return KS_ERR_DISAGREEMENT;
  case ErrorCode::Overflow: return KS_ERR_OVERFLOW;
  case ErrorCode::Io: return KS_ERR_IO;
  case ErrorCode::EmptyFile: return KS_ERR_EMPTY_FILE;
  case ErrorCode::MissingColumn: return KS_ERR_MISSING_COLUMN;
  case ErrorCode::MalformedRow: return KS_ERR_MALFORMED_ROW;
  case ErrorCode::EmptyGroup: return KS_ERR_EMPTY_GROUP;
  case ErrorCode::EmptyInput: return KS_ERR_EMPTY_INPUT;
  case ErrorCode::DegenerateRange: return KS_ERR_DEGENERATE_RANGE;
  case ErrorCode::DegenerateX: return KS_ERR_DEGENERATE_X;
  case ErrorCode::TooFewPoints: return KS_ERR_TOO_FEW_POINTS;
  case ErrorCode::NonpositiveVolume: return KS_ERR_NONPOSITIVE_VOLUME;
  case ErrorCode::NoConvergence: return KS_ERR_NO_CONVERGENCE;
  case ErrorCode::SingularJacobian: return KS_ERR_SINGULAR_JACOBIAN;
  }
  return KS_ERR_INTERNAL;
}

// Runs fn, translating exceptions into status codes at the boundary.
template <class Fn>
ks_status guard(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return KS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return KS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return KS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown exception";
    return KS_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p)
    fail(ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out)
    throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(char** out, const std::string& s) {
  require(out, "out");
  *out = dup_string(s);
}

KeyValueConfig params_of(const char* text) {
  return text ? KeyValueConfig::parse(text) : KeyValueConfig{};
}

double get_double(const KeyValueConfig& p, const std::string& key, double fallback) {
  auto v = p.get(key);
  if (!v)
    return fallback;
  if (*v == "inf" || *v == "+inf")
    return INFINITY;
  char* end = nullptr;
  double d = std::strtod(v->c_str(), &end);
  if (v->empty() || *end != '\0')
    fail(ErrorCode::ParseError, "parameter " + key + " is not a number: '" + *v + "'");
  return d;
}

long long get_int(const KeyValueConfig& p, const std::string& key, long long fallback) {
  auto v = p.get(key);
  if (!v)
    return fallback;
  char* end = nullptr;
  long long n = std::strtoll(v->c_str(), &end, 10);
  if (v->empty() || *end != '\0')
    fail(ErrorCode::ParseError, "parameter " + key + " is not an integer: '" + *v + "'");
  return n;
}

struct Common {
  GroupFilter filter;
  LogBase base = LogBase::E;
  int jobs = 1;
  XScale scale = XScale::Raw;
  std::uint64_t d = 50;
};

Common common_of(const KeyValueConfig& p, const char* default_groups = "all") {
  Common c;
  c.filter = parse_group_filter(p.get_or("groups", default_groups),
                                parse_crossing_set(p.get_or("crossings", "")));
  c.base = parse_log_base(p.get_or("log_base", "e"));
  c.jobs = static_cast<int>(get_int(p, "jobs", 1));
  c.scale = parse_x_scale(p.get_or("x_scale", "raw"));
  long long d = get_int(p, "d", 50);
  if (d < 1)
    fail(ErrorCode::InvalidArgument, "cutoff d must be at least 1");
  c.d = static_cast<std::uint64_t>(d);
  return c;
}

ks_status make_diagram(ks_diagram** out, const std::function<Diagram()>& make) {
  return guard([&] {
    require(out, "out");
    *out = nullptr;
    auto* h = new ks_diagram{make()};
    *out = h;
  });
}

std::vector<double> column(const KnotTable& t, std::span<const std::size_t> idx, const std::string& what,
                           LogBase base, bool log) {
  std::vector<double> v;
  for (std::size_t i : idx) {
    if (what == "volume") {
      if (t.volume(i) > 0)
        v.push_back(t.volume(i));
      continue;
    }
    double x = static_cast<double>(what == "rank" ? t.kfh_rank(i) : t.determinant(i));
    v.push_back(log ? log_in(x, base) : x);
  }
  return v;
}

HistogramRule rule_of(const KeyValueConfig& p) {
  HistogramRule r;
  std::string rule = p.get_or("rule", "fd");
  if (rule == "sturges")
    r.kind = HistogramRule::Kind::Sturges;
  else if (rule == "fd")
    r.kind = HistogramRule::Kind::FreedmanDiaconis;
  else if (rule == "unit")
    r.kind = HistogramRule::Kind::UnitWidth;
  else {
    r.kind = HistogramRule::Kind::FixedCount;
    r.bins = static_cast<std::size_t>(get_int(p, "rule", 10));
  }
  return r;
}

} // namespace

extern "C" {

const char* ks_version(void) { return "1.0.0"; }

const char* ks_status_name(ks_status status) {
  switch (status) {
  case KS_OK: return "OK";
  case KS_ERR_INTERNAL: return "Internal";
  default:
    if (status > KS_OK && status < KS_ERR_INTERNAL)
      return to_string(static_cast<ErrorCode>(status - 1));
    return "Unknown";
  }
}

const char* ks_last_error_message(void) { return g_last_error.c_str(); }

void ks_free_string(char* s) { std::free(s); }

ks_status ks_config_lookup(const char* config_text, const char* key, char** value) {
  return guard([&] {
    require(key, "key");
    require(value, "value");
    *value = nullptr;
    auto v = params_of(config_text).get(key);
    if (v)
      *value = dup_string(*v);
  });
}

ks_status ks_diagram_from_dt(const char* text, ks_diagram** out) {
  return make_diagram(out, [&] {
    require(text, "text");
    return realize(parse_dt(text));
  });
}

ks_status ks_diagram_from_gauss(const char* text, ks_diagram** out) {
  return make_diagram(out, [&] {
    require(text, "text");
    return realize(parse_gauss(text));
  });
}

ks_status ks_diagram_pretzel(int p, int q, int r, ks_diagram** out) {
  return make_diagram(out, [&] { return pretzel(PretzelSpec{p, q, r}); });
}

ks_status ks_diagram_twist(int n, ks_diagram** out) {
  return make_diagram(out, [&] { return twist(TwistSpec{n}); });
}

ks_status ks_diagram_mirror(const ks_diagram* d, ks_diagram** out) {
  return make_diagram(out, [&] {
    require(d, "diagram");
    return mirror(d->d);
  });
}

void ks_diagram_free(ks_diagram* d) { delete d; }

ks_status ks_diagram_crossings(const ks_diagram* d, int* out) {
  return guard([&] {
    require(d, "diagram");
    require(out, "out");
    *out = d->d.crossing_count();
  });
}

ks_status ks_diagram_writhe(const ks_diagram* d, int* out) {
  return guard([&] {
    require(d, "diagram");
    require(out, "out");
    *out = d->d.writhe();
  });
}

ks_status ks_diagram_faces(const ks_diagram* d, int* out) {
  return guard([&] {
    require(d, "diagram");
    require(out, "out");
    *out = d->d.face_count();
  });
}

ks_status ks_diagram_dt(const ks_diagram* d, char** out) {
  return guard([&] {
    require(d, "diagram");
    emit(out, extract_dt(d->d).str());
  });
}

ks_status ks_diagram_pd(const ks_diagram* d, char** out) {
  return guard([&] {
    require(d, "diagram");
    emit(out, d->d.pd_string());
  });
}

ks_status ks_diagram_bracket(const ks_diagram* d, char** out) {
  return guard([&] {
    require(d, "diagram");
    emit(out, kauffman_bracket(d->d).str());
  });
}

ks_status ks_diagram_determinants(const ks_diagram* d, ks_determinants* out) {
  return guard([&] {
    require(d, "diagram");
    require(out, "out");
    DeterminantRoutes r = determinant_routes(d->d);
    ks_determinants res{};
    res.goeritz = to_u64(r.goeritz);
    res.alexander = to_u64(r.alexander);
    res.jones_computed = r.jones.has_value();
    res.jones = r.jones ? to_u64(*r.jones) : 0;
    res.agree = r.agree();
    *out = res;
  });
}

ks_status ks_diagram_determinant(const ks_diagram* d, uint64_t* out) {
  return guard([&] {
    require(d, "diagram");
    require(out, "out");
    *out = to_u64(determinant(d->d));
  });
}

ks_status ks_family_report(const char* spec, ks_format format, char** out, int* all_match) {
  return guard([&] {
    require(spec, "spec");
    FamilyReport r = family_report(spec);
    emit(out, format == KS_FORMAT_CSV ? r.to_csv() : r.to_json());
    if (all_match)
      *all_match = r.all_match();
  });
}

ks_status ks_table_load(const char* const* paths, size_t npaths, const char* options, ks_table** out,
                        char** report_json) {
  return guard([&] {
    require(out, "out");
    *out = nullptr;
    if (npaths > 0)
      require(paths, "paths");
    std::vector<std::string> files;
    for (size_t i = 0; i < npaths; ++i) {
      require(paths[i], "path");
      files.emplace_back(paths[i]);
    }
    KeyValueConfig cfg = params_of(options);
    LoadOptions opt = load_options_from_config(cfg);
    if (auto c = cfg.get("crossings"))
      opt.crossings = parse_crossing_set(*c);
    LoadResult res = load_csv(files, opt);
    std::string report = res.report.to_json();
    auto* h = new ks_table{std::move(res.table)};
    if (report_json) {
      try {
        *report_json = dup_string(report);
      } catch (...) {
        delete h;
        throw;
      }
    }
    *out = h;
  });
}

void ks_table_free(ks_table* t) { delete t; }

ks_status ks_table_size(const ks_table* t, size_t* out) {
  return guard([&] {
    require(t, "table");
    require(out, "out");
    *out = t->t.size();
  });
}

ks_status ks_table_group_stats(const ks_table* t, ks_format format, char** out) {
  return guard([&] {
    require(t, "table");
    auto s = group_stats(t->t);
    emit(out, format == KS_FORMAT_CSV ? group_stats_csv(s) : group_stats_json(s));
  });
}

ks_status ks_table_verify_sample(const ks_table* t, size_t k, uint64_t seed, const char* crossings,
                                 int jobs, char** report_json, size_t* matches, size_t* sampled) {
  return guard([&] {
    require(t, "table");
    auto r = verify_sample(t->t, k, seed, parse_crossing_set(crossings ? crossings : ""), jobs);
    if (report_json)
      *report_json = dup_string(r.to_json());
    if (matches)
      *matches = r.count(SampleStatus::Match);
    if (sampled)
      *sampled = r.entries.size();
  });
}

ks_status ks_table_fit(const ks_table* t, const char* params, ks_format format, char** out,
                       size_t* failed) {
  return guard([&] {
    require(t, "table");
    auto p = params_of(params);
    Common c = common_of(p);
    YColumn y = parse_y_column(p.get_or("y", "kfh_rank"));
    auto fits = fit_groups(t->t, y, c.base, c.filter, c.jobs);
    emit(out, format == KS_FORMAT_CSV ? fits_csv(fits) : fits_json(fits, y, c.base));
    if (failed) {
      *failed = 0;
      for (const auto& f : fits)
        *failed += !f.fit;
    }
  });
}

ks_status ks_table_amin(const ks_table* t, const char* params, ks_format format, char** out) {
  return guard([&] {
    require(t, "table");
    auto p = params_of(params);
    Common c = common_of(p);
    auto rows = a_min_table(t->t, c.base, c.filter.crossings);
    emit(out, format == KS_FORMAT_CSV ? a_min_csv(rows) : a_min_json(rows, c.base));
  });
}

ks_status ks_table_density(const ks_table* t, const char* params, ks_format format, char** out,
                           size_t* failed) {
  return guard([&] {
    require(t, "table");
    auto p = params_of(params);
    Common c = common_of(p, "nonalt");
    auto rows = density_fits(t->t, c.d, c.filter, c.scale, LMControls{}, c.jobs);
    emit(out, format == KS_FORMAT_CSV ? density_fits_csv(rows) : density_fits_json(rows, c.scale));
    if (failed) {
      *failed = 0;
      for (const auto& r : rows)
        *failed += !r.fit;
    }
  });
}

ks_status ks_table_density_curve(const ks_table* t, const char* params, char** out) {
  return guard([&] {
    require(t, "table");
    auto p = params_of(params);
    Common c = common_of(p, "nonalt");
    auto key = parse_group_label(p.get_or("group", ""));
    if (!key)
      fail(ErrorCode::InvalidArgument, "density curve needs group = <label>");
    auto vols = group_volumes(t->t, *key, c.scale);
    if (vols.x.empty())
      fail(ErrorCode::EmptyGroup, "group " + key->label() + " has no hyperbolic records");
    emit(out, density_curve_csv(density_f(vols.x, vols.ranks, c.d)));
  });
}

ks_status ks_table_check(const ks_table* t, const char* check, const char* params, ks_format format,
                         char** out) {
  return guard([&] {
    require(t, "table");
    require(check, "check");
    auto p = params_of(params);
    const std::string which = check;
    ConjectureReport r;
    if (which == "rank-volume") {
      Common c = common_of(p);
      r = check_rank_volume(t->t, get_double(p, "a", 1.0), c.base, c.filter);
    } else if (which == "rank-volume-amin") {
      Common c = common_of(p);
      std::map<GroupKey, double> per;
      for (const auto& key : selected_groups(t->t, c.filter)) {
        std::vector<double> xs, ys;
        for (std::size_t i : t->t.group_indices(key))
          if (t->t.volume(i) > 0) {
            xs.push_back(t->t.volume(i));
            ys.push_back(log_in(static_cast<double>(t->t.kfh_rank(i)), c.base));
          }
        if (!xs.empty())
          per[key] = a_min(xs, ys);
      }
      r = check_rank_volume(t->t, per, c.base, c.filter);
      r.check = "rank-volume-amin";
    } else if (which == "det-volume") {
      Common c = common_of(p);
      r = check_det_volume(t->t, get_double(p, "a", 1.0), get_double(p, "b", 0.0), c.base, c.filter);
    } else if (which == "density") {
      Common c = common_of(p, "nonalt");
      const double margin = get_double(p, "margin", 0.05);
      std::map<GroupKey, SigmoidParams> params_by_group;
      if (p.contains("L") && p.contains("k") && p.contains("x0") && p.contains("b")) {
        SigmoidParams sp{get_double(p, "L", 0), get_double(p, "k", 0), get_double(p, "x0", 0),
                         get_double(p, "b", 0)};
        for (const auto& key : selected_groups(t->t, c.filter))
          params_by_group[key] = sp;
      } else {
        for (const auto& row : density_fits(t->t, c.d, c.filter, c.scale, LMControls{}, c.jobs))
          if (row.fit)
            params_by_group[row.key] = row.fit->params;
      }
      r = check_density_bound(t->t, c.d, params_by_group, margin, c.scale, c.filter);
    } else if (which == "stoimenow") {
      Common c = common_of(p, "alt");
      r = check_stoimenow(t->t, c.filter);
    } else {
      fail(ErrorCode::InvalidArgument, "unknown check '" + which + "'");
    }
    emit(out, format == KS_FORMAT_CSV ? r.to_csv() : r.to_json());
  });
}

ks_status ks_table_plot(const ks_table* t, const char* kind, const char* params, char** svg) {
  return guard([&] {
    require(t, "table");
    require(kind, "kind");
    auto p = params_of(params);
    Common c = common_of(p);
    const std::string k = kind;
    PlotOptions opt;
    opt.seed = static_cast<std::uint64_t>(get_int(p, "seed", 1));
    opt.max_points = static_cast<std::size_t>(get_int(p, "max_points", 100000));
    opt.timestamp = parse_bool(p.get_or("timestamp", "0")).value_or(false);
    const int cross = static_cast<int>(get_int(p, "crossings", 0));
    const KnotTable& tab = t->t;
    const GroupKey keys[2] = {{cross, false}, {cross, true}};
    const std::string base_label = c.base == LogBase::E ? "log" : "log10";

    if (k == "scatter-rank" || k == "scatter-det") {
      const std::string what = k == "scatter-rank" ? "rank" : "det";
      std::vector<PointSeries> pts;
      std::vector<LineSeries> lines;
      for (const auto& key : keys) {
        auto idx = tab.group_indices(key);
        PointSeries s{key.label(), {}, {}, key.alternating ? "#ff7f0e" : "#1f77b4"};
        for (std::size_t i : idx) {
          if (!(tab.volume(i) > 0))
            continue;
          s.x.push_back(tab.volume(i));
          double v = static_cast<double>(what == "rank" ? tab.kfh_rank(i) : tab.determinant(i));
          s.y.push_back(log_in(v, c.base));
        }
        if (s.x.empty())
          continue;
        try {
          LinearFit f = linfit(s.x, s.y);
          auto [lo, hi] = std::minmax_element(s.x.begin(), s.x.end());
          lines.push_back(LineSeries{key.label() + " fit", {*lo, *hi},
                                     {f.slope * *lo + f.intercept, f.slope * *hi + f.intercept},
                                     key.alternating ? "#a04000" : "#0b3d66", false});
        } catch (const Error&) {
        }
        pts.push_back(std::move(s));
      }
      if (pts.empty())
        fail(ErrorCode::EmptyGroup, "no hyperbolic records with " + std::to_string(cross) + " crossings");
      opt.title = std::to_string(cross) + " crossings";
      opt.xlabel = "Volume";
      opt.ylabel = base_label + (what == "rank" ? " r(K)" : " det(K)");
      emit(svg, svg_scatter(pts, lines, opt));
    } else if (k == "hist-rank" || k == "hist-volume" || k == "hist-det") {
      const std::string what = k == "hist-rank" ? "rank" : k == "hist-det" ? "det" : "volume";
      std::vector<std::pair<std::string, Histogram>> hists;
      for (const auto& key : keys) {
        auto v = column(tab, tab.group_indices(key), what, c.base, false);
        if (v.size() < 2)
          continue;
        try {
          hists.emplace_back(key.label(), histogram_pdf(v, rule_of(p)));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::DegenerateRange)
            throw;
        }
      }
      if (hists.empty())
        fail(ErrorCode::EmptyGroup, "nothing to histogram for " + std::to_string(cross) + " crossings");
      opt.title = std::to_string(cross) + " crossings";
      opt.xlabel = what == "rank" ? "r(K)" : what == "det" ? "det(K)" : "Vol(K)";
      opt.ylabel = "probability density";
      emit(svg, svg_histogram(hists, opt));
    } else if (k == "density") {
      GroupKey key = keys[0];
      if (auto g = p.get("group")) {
        auto parsed = parse_group_label(*g);
        if (!parsed)
          fail(ErrorCode::ParseError, "not a group label: '" + *g + "'");
        key = *parsed;
      }
      auto vols = group_volumes(tab, key, c.scale);
      if (vols.x.empty())
        fail(ErrorCode::EmptyGroup, "group " + key.label() + " has no hyperbolic records");
      DensityCurve curve = density_f(vols.x, vols.ranks, c.d);
      std::optional<SigmoidParams> fit;
      try {
        fit = sigmoid_fit(curve).params;
      } catch (const Error&) {
      }
      opt.title = key.label() + ", d = " + std::to_string(c.d);
      opt.xlabel = std::string("Volume (") + to_string(c.scale) + ")";
      opt.ylabel = "f(x)";
      emit(svg, svg_density(curve, fit, opt));
    } else {
      fail(ErrorCode::InvalidArgument, "unknown plot kind '" + k + "'");
    }
  });
}

} // extern "C"
