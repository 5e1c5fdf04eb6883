// Exercises the shared library through its C header only.
#include <cstdlib>
#include <cstring>
#include <string>

#include "doctest.h"

#include "knotscope/knotscope.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  ks_free_string(s);
  return out;
}

std::string data(const char* name) { return std::string(KS_TEST_DATA_DIR) + "/" + name; }

} // namespace

TEST_SUITE("capi") {
  TEST_CASE("diagram lifecycle") {
    ks_diagram* d = nullptr;
    REQUIRE(ks_diagram_from_dt("4 6 2", &d) == KS_OK);
    int c = 0, faces = 0;
    CHECK(ks_diagram_crossings(d, &c) == KS_OK);
    CHECK(c == 3);
    CHECK(ks_diagram_faces(d, &faces) == KS_OK);
    CHECK(faces == 5);
    uint64_t det = 0;
    CHECK(ks_diagram_determinant(d, &det) == KS_OK);
    CHECK(det == 3);
    ks_determinants all{};
    CHECK(ks_diagram_determinants(d, &all) == KS_OK);
    CHECK(all.agree);
    CHECK(all.jones_computed);
    CHECK(all.alexander == 3);
    char* dt = nullptr;
    CHECK(ks_diagram_dt(d, &dt) == KS_OK);
    CHECK(take(dt) == "4 6 2");

    ks_diagram* m = nullptr;
    CHECK(ks_diagram_mirror(d, &m) == KS_OK);
    int w = 0, wm = 0;
    ks_diagram_writhe(d, &w);
    ks_diagram_writhe(m, &wm);
    CHECK(w == -wm);
    ks_diagram_free(m);
    ks_diagram_free(d);
    ks_diagram_free(nullptr);
  }

  TEST_CASE("errors map to status codes") {
    ks_diagram* d = nullptr;
    CHECK(ks_diagram_from_dt("4 5 2", &d) == KS_ERR_ODD_VALUE);
    CHECK(d == nullptr);
    CHECK(std::strlen(ks_last_error_message()) > 0);
    CHECK(std::string(ks_status_name(KS_ERR_ODD_VALUE)) == "OddValue");
    CHECK(ks_diagram_from_dt("4 6 8 10 2", &d) == KS_ERR_NON_REALIZABLE);
    CHECK(ks_diagram_pretzel(2, 2, 3, &d) == KS_ERR_NOT_A_KNOT);
    CHECK(ks_diagram_from_dt(nullptr, &d) == KS_ERR_INVALID_ARGUMENT);
    CHECK(ks_diagram_crossings(nullptr, nullptr) == KS_ERR_INVALID_ARGUMENT);
    CHECK(std::string(ks_version()).size() > 0);
  }

  TEST_CASE("families") {
    char* out = nullptr;
    int all = 0;
    CHECK(ks_family_report("twist:1..30", KS_FORMAT_JSON, &out, &all) == KS_OK);
    CHECK(all == 1);
    CHECK(take(out).find("\"matches\": 30") != std::string::npos);
    ks_diagram* d = nullptr;
    REQUIRE(ks_diagram_twist(30, &d) == KS_OK);
    uint64_t det = 0;
    CHECK(ks_diagram_determinant(d, &det) == KS_OK);
    CHECK(det == 61);
    ks_diagram_free(d);
  }

  TEST_CASE("config lookup") {
    char* v = nullptr;
    CHECK(ks_config_lookup("a = 1\n[s]\nb = \"x y\" # c\n", "s.b", &v) == KS_OK);
    CHECK(take(v) == "x y");
    v = nullptr;
    CHECK(ks_config_lookup("a = 1\n", "missing", &v) == KS_OK);
    CHECK(v == nullptr);
  }

  TEST_CASE("table analysis") {
    std::string path = data("small.csv");
    const char* paths[] = {path.c_str()};
    ks_table* t = nullptr;
    char* report = nullptr;
    REQUIRE(ks_table_load(paths, 1, nullptr, &t, &report) == KS_OK);
    CHECK(take(report).find("\"loaded\": 17") != std::string::npos);
    size_t n = 0;
    CHECK(ks_table_size(t, &n) == KS_OK);
    CHECK(n == 17);

    char* out = nullptr;
    size_t failed = 0;
    CHECK(ks_table_fit(t, "y = kfh_rank\ngroups = alt\n", KS_FORMAT_CSV, &out, &failed) == KS_OK);
    std::string csv = take(out);
    CHECK(csv.find("7a,") != std::string::npos);
    CHECK(failed == 3); // 3a, 4a, 5a have too few hyperbolic rows

    size_t matches = 0, sampled = 0;
    CHECK(ks_table_verify_sample(t, 10, 1, "7", 1, &out, &matches, &sampled) == KS_OK);
    ks_free_string(out);
    CHECK(sampled == 7);
    CHECK(matches == 7);

    CHECK(ks_table_check(t, "stoimenow", nullptr, KS_FORMAT_JSON, &out) == KS_OK);
    CHECK(take(out).find("\"violations_strict\": 0") != std::string::npos);
    CHECK(ks_table_check(t, "nonsense", nullptr, KS_FORMAT_JSON, &out) == KS_ERR_INVALID_ARGUMENT);

    CHECK(ks_table_plot(t, "scatter-rank", "crossings = 7\n", &out) == KS_OK);
    CHECK(take(out).find("<svg") != std::string::npos);
    CHECK(ks_table_plot(t, "scatter-rank", "crossings = 11\n", &out) == KS_ERR_EMPTY_GROUP);
    ks_table_free(t);
  }

  TEST_CASE("load failures") {
    std::string path = data("missing_column.csv");
    const char* paths[] = {path.c_str()};
    ks_table* t = nullptr;
    CHECK(ks_table_load(paths, 1, nullptr, &t, nullptr) == KS_ERR_MISSING_COLUMN);
    CHECK(t == nullptr);
    std::string bad = data("dirty.csv");
    const char* bad_paths[] = {bad.c_str()};
    CHECK(ks_table_load(bad_paths, 1, "policy = strict\n", &t, nullptr) == KS_ERR_MALFORMED_ROW);
  }
}
