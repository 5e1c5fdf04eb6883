#include <random>

#include "doctest.h"

#include "knotscope/plot.hpp"

using namespace knotscope;

namespace {

PointSeries cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0, 1);
  PointSeries s;
  s.label = "cloud";
  for (std::size_t i = 0; i < n; ++i) {
    s.x.push_back(d(rng));
    s.y.push_back(d(rng));
  }
  return s;
}

std::size_t count(const std::string& s, const std::string& what) {
  std::size_t n = 0;
  for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1))
    ++n;
  return n;
}

} // namespace

TEST_SUITE("plot") {
  TEST_CASE("scatter is deterministic") {
    PlotOptions opt;
    opt.title = "t & <u>";
    std::vector<LineSeries> lines{{"fit", {-3, 3}, {-1, 1}, "", false}};
    std::string a = svg_scatter({cloud(500, 1)}, lines, opt);
    std::string b = svg_scatter({cloud(500, 1)}, lines, opt);
    CHECK(a == b);
    CHECK(a.rfind("<?xml", 0) == 0);
    CHECK(a.find("t &amp; &lt;u&gt;") != std::string::npos);
    CHECK(count(a, "<circle") == 500);
  }

  TEST_CASE("scatter downsampling is seeded and recorded") {
    PlotOptions opt;
    opt.max_points = 100;
    std::string a = svg_scatter({cloud(1000, 2)}, {}, opt);
    CHECK(count(a, "<circle") == 100);
    CHECK(a.find("&quot;downsampled&quot;: true") != std::string::npos);
    CHECK(a == svg_scatter({cloud(1000, 2)}, {}, opt));
    opt.seed = 99;
    CHECK(a != svg_scatter({cloud(1000, 2)}, {}, opt));
  }

  TEST_CASE("timestamp is opt-in") {
    PlotOptions opt;
    std::string plain = svg_scatter({cloud(10, 3)}, {}, opt);
    CHECK(plain.find("generated") == std::string::npos);
    opt.timestamp = true;
    std::string stamped = svg_scatter({cloud(10, 3)}, {}, opt);
    CHECK(stamped.find("<!-- generated") != std::string::npos);
  }

  TEST_CASE("histogram and density plots") {
    Histogram h;
    h.edges = {0, 1, 2};
    h.counts = {1, 3};
    h.density = {0.25, 0.75};
    std::string s = svg_histogram({{"a", h}}, PlotOptions{});
    CHECK(count(s, "<rect") >= 3);
    DensityCurve c;
    c.x = {1, 2, 3};
    c.f = {1, 0.5, 0.25};
    c.f_infinity = 0.25;
    std::string d = svg_density(c, SigmoidParams{-1, 3, 2, 1}, PlotOptions{});
    CHECK(d.find("<polyline") != std::string::npos);
    CHECK(d == svg_density(c, SigmoidParams{-1, 3, 2, 1}, PlotOptions{}));
  }
}
