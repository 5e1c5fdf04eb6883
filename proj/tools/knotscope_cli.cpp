// Command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "knotscope/knotscope.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAnalysis = 1;
constexpr int kExitUsage = 2;

struct CliError {
  int exit_code;
  std::string message;
};

int exit_code_for(ks_status s) {
  switch (s) {
  case KS_ERR_IO:
  case KS_ERR_EMPTY_FILE:
  case KS_ERR_MISSING_COLUMN:
  case KS_ERR_MALFORMED_ROW:
  case KS_ERR_PARSE:
  case KS_ERR_INVALID_ARGUMENT:
    return kExitUsage;
  default:
    return kExitAnalysis;
  }
}

void check(ks_status s, const std::string& what) {
  if (s != KS_OK)
    throw CliError{exit_code_for(s), what + ": " + ks_status_name(s) + ": " + ks_last_error_message()};
}

// Owns a string returned by the library.
struct LibString {
  char* p = nullptr;
  ~LibString() { ks_free_string(p); }
  std::string str() const { return p ? p : ""; }
};

struct TableDeleter {
  void operator()(ks_table* t) const { ks_table_free(t); }
};
using TablePtr = std::unique_ptr<ks_table, TableDeleter>;

struct DiagramDeleter {
  void operator()(ks_diagram* d) const { ks_diagram_free(d); }
};
using DiagramPtr = std::unique_ptr<ks_diagram, DiagramDeleter>;

std::string read_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw CliError{kExitUsage, std::string("cannot open ") + what + " '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Flags shared by every subcommand. Values from --config are read first;
/// flags given on the command line are appended later and so win.
struct Common {
  std::vector<std::string> data;
  std::string map_path;
  std::string config_path;
  std::string out_dir;
  std::string log_base = "e";
  std::string groups;
  std::string crossings;
  std::string x_scale = "raw";
  unsigned long long seed = 1;
  int jobs = 1;
  bool strict = false;

  std::string config_text;
  std::vector<std::pair<std::string, std::string>> flags; // given on the command line
  CLI::App* app = nullptr;

  void add_to(CLI::App& sub) {
    app = &sub;
    sub.add_option("--data", data, "input CSV file(s)");
    sub.add_option("--map", map_path, "header map file (key = value)");
    sub.add_option("--config", config_path, "config file (key = value); flags win");
    sub.add_option("--out", out_dir, "output directory");
    sub.add_option("--log-base", log_base, "logarithm base")->check(CLI::IsMember({"e", "10"}));
    sub.add_option("--groups", groups, "all | alt | nonalt | labels like 12a,13n");
    sub.add_option("--crossings", crossings, "crossing numbers, e.g. 12 or 12..17");
    sub.add_option("--x-scale", x_scale, "density abscissa: raw | per-crossing | unit-max");
    sub.add_option("--seed", seed, "random seed for sampling");
    sub.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sub.add_flag("--strict", strict, "reject the input on the first bad row");
  }

  bool given(const std::string& name) const { return app->get_option(name)->count() > 0; }

  // Resolves --config and --map, then records explicitly given flags.
  void finalize() {
    if (!config_path.empty())
      config_text = read_file(config_path, "config file");
    if (map_path.empty())
      if (auto m = lookup("map"))
        map_path = *m;
    if (!map_path.empty())
      config_text += "\n[]\n" + read_file(map_path, "header map");
    auto from_config = [&](const char* flag, const char* key, auto& target) {
      if (!given(flag))
        if (auto v = lookup(key))
          assign(target, *v);
    };
    from_config("--out", "out", out_dir);
    from_config("--log-base", "log_base", log_base);
    from_config("--groups", "groups", groups);
    from_config("--crossings", "crossings", crossings);
    from_config("--x-scale", "x_scale", x_scale);
    from_config("--seed", "seed", seed);
    from_config("--jobs", "jobs", jobs);
    if (data.empty())
      if (auto v = lookup("data"))
        data.push_back(*v);
    if (!given("--strict"))
      if (auto v = lookup("policy"))
        strict = *v == "strict";
  }

  std::optional<std::string> lookup(const std::string& key) const {
    LibString v;
    check(ks_config_lookup(config_text.c_str(), key.c_str(), &v.p), "config");
    if (!v.p)
      return std::nullopt;
    return v.str();
  }

  // Parameter text for the library: config text, then resolved values.
  std::string params(const std::vector<std::pair<std::string, std::string>>& extra = {}) const {
    std::string text = config_text + "\n[]\n";
    text += "log_base = " + log_base + "\n";
    text += "jobs = " + std::to_string(jobs) + "\n";
    text += "seed = " + std::to_string(seed) + "\n";
    text += "x_scale = " + x_scale + "\n";
    if (!groups.empty())
      text += "groups = " + groups + "\n";
    if (!crossings.empty())
      text += "crossings = " + crossings + "\n";
    if (strict)
      text += "policy = strict\n";
    for (const auto& [k, v] : extra)
      text += k + " = " + v + "\n";
    return text;
  }

  TablePtr load(std::string* report = nullptr) const {
    if (data.empty())
      throw CliError{kExitUsage, "no input data (use --data or a positional file)"};
    for (const auto& d : data)
      if (!fs::exists(d))
        throw CliError{kExitUsage, "input file '" + d + "' does not exist"};
    std::vector<const char*> paths;
    for (const auto& d : data)
      paths.push_back(d.c_str());
    ks_table* t = nullptr;
    LibString rep;
    check(ks_table_load(paths.data(), paths.size(), params().c_str(), &t, &rep.p), "load");
    if (report)
      *report = rep.str();
    return TablePtr(t);
  }

  // Writes to --out/<name> when an output directory is set, else stdout.
  void write(const std::string& name, const std::string& content, bool to_stdout_too = true) const {
    if (out_dir.empty()) {
      if (to_stdout_too)
        std::cout << content;
      return;
    }
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    fs::path p = fs::path(out_dir) / name;
    std::ofstream out(p, std::ios::binary);
    if (!out)
      throw CliError{kExitUsage, "cannot write '" + p.string() + "'"};
    out << content;
    std::cerr << "wrote " << p.string() << "\n";
  }

private:
  static void assign(std::string& t, const std::string& v) { t = v; }
  static void assign(int& t, const std::string& v) { t = std::stoi(v); }
  static void assign(unsigned long long& t, const std::string& v) { t = std::stoull(v); }
};

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

std::vector<int> expand_crossings(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(std::stoi(part));
    } else {
      int lo = std::stoi(part.substr(0, dots)), hi = std::stoi(part.substr(dots + 2));
      for (int c = lo; c <= hi; ++c)
        out.push_back(c);
    }
  }
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"knotscope: knot determinants, dataset statistics and conjecture checks"};
  app.require_subcommand(1);

  // import
  Common import_c;
  std::vector<std::string> import_files;
  auto* import_cmd = app.add_subcommand("import", "ingest and validate dataset CSV files");
  import_c.add_to(*import_cmd);
  import_cmd->add_option("files", import_files, "CSV files (in addition to --data)");

  // verify
  Common verify_c;
  std::vector<std::string> families;
  std::size_t sample = 0;
  auto* verify_cmd = app.add_subcommand("verify", "three-way determinant consensus checks");
  verify_c.add_to(*verify_cmd);
  verify_cmd->add_option("--families", families, "family spec, e.g. twist:1..30");
  verify_cmd->add_option("--sample", sample, "number of dataset records to verify");

  // knot
  Common knot_c;
  std::string knot_dt, knot_gauss;
  auto* knot_cmd = app.add_subcommand("knot", "invariants of a single DT or Gauss code");
  knot_c.add_to(*knot_cmd);
  knot_cmd->add_option("--dt", knot_dt, "DT code, e.g. \"4 6 2\"");
  knot_cmd->add_option("--gauss", knot_gauss, "Gauss code, e.g. \"-1 2 -3 1 -2 3\"");

  // fit
  Common fit_c;
  std::string fit_y = "kfh_rank";
  auto* fit_cmd = app.add_subcommand("fit", "per-group OLS of log invariant against volume");
  fit_c.add_to(*fit_cmd);
  fit_cmd->add_option("--y", fit_y, "kfh_rank | determinant")
      ->check(CLI::IsMember({"kfh_rank", "determinant"}));

  // density
  Common dens_c;
  long long dens_d = 50;
  bool dens_plot = true;
  auto* dens_cmd = app.add_subcommand("density", "density curves f(x) and sigmoid fits");
  dens_c.add_to(*dens_cmd);
  dens_cmd->add_option("--d", dens_d, "rank cutoff")->check(CLI::PositiveNumber);
  dens_cmd->add_flag("--plot,!--no-plot", dens_plot, "write SVG plots (with --out)");

  // check
  Common check_c;
  std::string check_kind;
  double check_a = 1.0, check_b = 0.0, check_margin = 0.05;
  long long check_d = 50;
  auto* check_cmd = app.add_subcommand("check", "evaluate a conjectured bound");
  check_c.add_to(*check_cmd);
  check_cmd->add_option("kind", check_kind, "rank-volume | rank-volume-amin | det-volume | density | stoimenow")
      ->required()
      ->check(CLI::IsMember({"rank-volume", "rank-volume-amin", "det-volume", "density", "stoimenow"}));
  check_cmd->add_option("--a", check_a, "slope bound");
  check_cmd->add_option("--b", check_b, "intercept bound");
  check_cmd->add_option("--d", check_d, "rank cutoff")->check(CLI::PositiveNumber);
  check_cmd->add_option("--margin", check_margin, "density margin");

  // plot
  Common plot_c;
  std::vector<std::string> plot_kinds;
  std::string plot_rule = "fd";
  long long plot_d = 50;
  bool plot_timestamp = false;
  auto* plot_cmd = app.add_subcommand("plot", "SVG scatter, histogram and density plots");
  plot_c.add_to(*plot_cmd);
  plot_cmd->add_option("--kind", plot_kinds, "scatter-rank | scatter-det | hist-rank | hist-volume | hist-det | density")
      ->required();
  plot_cmd->add_option("--rule", plot_rule, "histogram rule: fd | sturges | unit | <bins>");
  plot_cmd->add_option("--d", plot_d, "rank cutoff for density plots")->check(CLI::PositiveNumber);
  plot_cmd->add_flag("--timestamp", plot_timestamp, "embed a generation timestamp comment");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*import_cmd) {
      import_c.finalize();
      import_c.data.insert(import_c.data.end(), import_files.begin(), import_files.end());
      std::string report;
      TablePtr t = import_c.load(&report);
      import_c.write("import_report.json", report);
      LibString stats;
      size_t n = 0;
      check(ks_table_size(t.get(), &n), "size");
      if (n > 0) {
        check(ks_table_group_stats(t.get(), KS_FORMAT_CSV, &stats.p), "group stats");
        import_c.write("group_stats.csv", stats.str(), false);
      } else {
        warn("no records loaded");
      }
      return kExitOk;
    }

    if (*verify_cmd) {
      verify_c.finalize();
      if (families.empty() && sample == 0)
        throw CliError{kExitUsage, "verify needs --families and/or --sample"};
      bool ok = true;
      int idx = 0;
      for (const auto& spec : families) {
        LibString json, csv;
        int all = 0;
        check(ks_family_report(spec.c_str(), KS_FORMAT_JSON, &json.p, &all), "family " + spec);
        check(ks_family_report(spec.c_str(), KS_FORMAT_CSV, &csv.p, nullptr), "family " + spec);
        std::string stem = "family_" + std::to_string(idx++);
        verify_c.write(stem + ".json", json.str());
        verify_c.write(stem + ".csv", csv.str(), false);
        if (!all) {
          ok = false;
          warn("family " + spec + " has mismatches");
        }
      }
      if (sample > 0) {
        TablePtr t = verify_c.load();
        LibString json;
        size_t matches = 0, sampled = 0;
        check(ks_table_verify_sample(t.get(), sample, verify_c.seed, verify_c.crossings.c_str(), verify_c.jobs,
                                     &json.p, &matches, &sampled),
              "verify sample");
        verify_c.write("verify_sample.json", json.str());
        std::cerr << matches << "/" << sampled << " sampled determinants match\n";
        if (matches != sampled)
          ok = false;
      }
      return ok ? kExitOk : kExitAnalysis;
    }

    if (*knot_cmd) {
      knot_c.finalize();
      ks_diagram* raw = nullptr;
      if (!knot_dt.empty())
        check(ks_diagram_from_dt(knot_dt.c_str(), &raw), "DT code");
      else if (!knot_gauss.empty())
        check(ks_diagram_from_gauss(knot_gauss.c_str(), &raw), "Gauss code");
      else
        throw CliError{kExitUsage, "knot needs --dt or --gauss"};
      DiagramPtr d(raw);
      int c = 0, w = 0, faces = 0;
      check(ks_diagram_crossings(d.get(), &c), "crossings");
      check(ks_diagram_writhe(d.get(), &w), "writhe");
      check(ks_diagram_faces(d.get(), &faces), "faces");
      LibString dt, pd;
      check(ks_diagram_dt(d.get(), &dt.p), "dt");
      check(ks_diagram_pd(d.get(), &pd.p), "pd");
      ks_determinants det{};
      check(ks_diagram_determinants(d.get(), &det), "determinants");
      std::ostringstream os;
      os << "crossings: " << c << "\nwrithe: " << w << "\nfaces: " << faces << "\ndt: " << dt.str()
         << "\npd: " << pd.str() << "\ngoeritz: " << det.goeritz << "\nalexander: " << det.alexander
         << "\njones: " << (det.jones_computed ? std::to_string(det.jones) : "over budget") << "\n";
      LibString br;
      if (ks_diagram_bracket(d.get(), &br.p) == KS_OK)
        os << "bracket: " << br.str() << "\n";
      std::cout << os.str();
      if (!det.agree) {
        std::cerr << "determinant routes disagree\n";
        return kExitAnalysis;
      }
      return kExitOk;
    }

    if (*fit_cmd) {
      fit_c.finalize();
      if (!fit_cmd->get_option("--y")->count())
        if (auto v = fit_c.lookup("y"))
          fit_y = *v;
      TablePtr t = fit_c.load();
      std::string p = fit_c.params({{"y", fit_y}});
      LibString csv, json;
      size_t failed = 0;
      check(ks_table_fit(t.get(), p.c_str(), KS_FORMAT_CSV, &csv.p, &failed), "fit");
      check(ks_table_fit(t.get(), p.c_str(), KS_FORMAT_JSON, &json.p, nullptr), "fit");
      fit_c.write("fit_" + fit_y + ".csv", csv.str());
      fit_c.write("fit_" + fit_y + ".json", json.str(), false);
      if (fit_y == "kfh_rank") {
        LibString amin_csv, amin_json;
        check(ks_table_amin(t.get(), p.c_str(), KS_FORMAT_CSV, &amin_csv.p), "a_min");
        check(ks_table_amin(t.get(), p.c_str(), KS_FORMAT_JSON, &amin_json.p), "a_min");
        fit_c.write("a_min.csv", amin_csv.str(), false);
        fit_c.write("a_min.json", amin_json.str(), false);
      }
      if (failed > 0)
        warn(std::to_string(failed) + " group fit(s) failed; see the error column");
      return kExitOk;
    }

    if (*dens_cmd) {
      dens_c.finalize();
      if (dens_c.groups.empty())
        dens_c.groups = "nonalt";
      TablePtr t = dens_c.load();
      std::vector<std::pair<std::string, std::string>> extra;
      if (dens_cmd->get_option("--d")->count())
        extra.emplace_back("d", std::to_string(dens_d));
      std::string p = dens_c.params(extra);
      LibString csv, json;
      size_t failed = 0;
      check(ks_table_density(t.get(), p.c_str(), KS_FORMAT_CSV, &csv.p, &failed), "density");
      check(ks_table_density(t.get(), p.c_str(), KS_FORMAT_JSON, &json.p, nullptr), "density");
      dens_c.write("density_fits.csv", csv.str());
      dens_c.write("density_fits.json", json.str(), false);
      if (failed > 0)
        warn(std::to_string(failed) + " sigmoid fit(s) refused or failed; see the error column");
      if (!dens_c.out_dir.empty()) {
        // One curve (and plot) per fitted row.
        std::istringstream rows(csv.str());
        std::string line;
        std::getline(rows, line);
        while (std::getline(rows, line)) {
          std::string label = line.substr(0, line.find(','));
          std::string gp = p + "group = " + label + "\n";
          LibString curve;
          if (ks_table_density_curve(t.get(), gp.c_str(), &curve.p) != KS_OK) {
            warn(label + ": " + ks_last_error_message());
            continue;
          }
          dens_c.write("density_" + label + ".csv", curve.str(), false);
          if (dens_plot) {
            LibString svg;
            if (ks_table_plot(t.get(), "density", gp.c_str(), &svg.p) == KS_OK)
              dens_c.write("density_" + label + ".svg", svg.str(), false);
            else
              warn(label + ": " + ks_last_error_message());
          }
        }
      }
      return kExitOk;
    }

    if (*check_cmd) {
      check_c.finalize();
      TablePtr t = check_c.load();
      std::vector<std::pair<std::string, std::string>> extra;
      if (check_cmd->get_option("--d")->count())
        extra.emplace_back("d", std::to_string(check_d));
      auto fmt = [](double v) {
        std::ostringstream os;
        os.precision(17);
        os << v;
        return os.str();
      };
      if (check_cmd->get_option("--a")->count())
        extra.emplace_back("a", fmt(check_a));
      if (check_cmd->get_option("--b")->count())
        extra.emplace_back("b", fmt(check_b));
      if (check_cmd->get_option("--margin")->count())
        extra.emplace_back("margin", fmt(check_margin));
      std::string p = check_c.params(extra);
      LibString json, csv;
      check(ks_table_check(t.get(), check_kind.c_str(), p.c_str(), KS_FORMAT_JSON, &json.p), "check");
      check(ks_table_check(t.get(), check_kind.c_str(), p.c_str(), KS_FORMAT_CSV, &csv.p), "check");
      check_c.write("check_" + check_kind + ".json", json.str());
      check_c.write("check_" + check_kind + ".csv", csv.str(), false);
      return kExitOk;
    }

    if (*plot_cmd) {
      plot_c.finalize();
      TablePtr t = plot_c.load();
      if (plot_c.crossings.empty())
        plot_c.crossings = "12..17";
      if (plot_c.out_dir.empty())
        throw CliError{kExitUsage, "plot needs --out"};
      int written = 0;
      for (const auto& kind : plot_kinds) {
        for (int c : expand_crossings(plot_c.crossings)) {
          std::vector<std::pair<std::string, std::string>> extra;
          if (plot_cmd->get_option("--rule")->count() || !plot_c.lookup("rule"))
            extra.emplace_back("rule", plot_rule);
          if (plot_cmd->get_option("--d")->count())
            extra.emplace_back("d", std::to_string(plot_d));
          if (plot_cmd->get_option("--timestamp")->count())
            extra.emplace_back("timestamp", "1");
          Common single = plot_c;
          single.crossings = std::to_string(c);
          std::string p = single.params(extra);
          if (kind == "density")
            p += "group = " + std::to_string(c) + "n\n";
          LibString svg;
          ks_status s = ks_table_plot(t.get(), kind.c_str(), p.c_str(), &svg.p);
          if (s == KS_ERR_EMPTY_GROUP) {
            warn(kind + " for " + std::to_string(c) + " crossings: empty group, no file written");
            continue;
          }
          check(s, "plot " + kind);
          plot_c.write(kind + "_" + std::to_string(c) + ".svg", svg.str(), false);
          ++written;
        }
      }
      if (written == 0)
        warn("no plots written");
      return kExitOk;
    }
  } catch (const CliError& e) {
    std::cerr << "error: " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
