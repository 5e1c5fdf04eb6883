#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "knotscope/error.hpp"
#include "knotscope/stats.hpp"

using namespace knotscope;

namespace {

ErrorCode error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidArgument;
}

} // namespace

TEST_SUITE("stats") {
  TEST_CASE("collinear data is fitted exactly") {
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
      x.push_back(0.5 * i);
      y.push_back(3.0 * (0.5 * i) - 2.0);
    }
    LinearFit f = linfit(x, y);
    CHECK(std::abs(f.slope - 3.0) < 1e-12);
    CHECK(std::abs(f.intercept + 2.0) < 1e-12);
    CHECK(std::abs(f.r_squared - 1.0) < 1e-12);
    CHECK(f.slope_err < 1e-12);
    CHECK(f.intercept_err < 1e-12);
  }

  TEST_CASE("three point oracle") {
    std::vector<double> x{0, 1, 2}, y{0, 1, 0};
    LinearFit f = linfit(x, y);
    CHECK(std::abs(f.slope) < 1e-12);
    CHECK(std::abs(f.intercept - 1.0 / 3.0) < 1e-12);
    CHECK(std::abs(f.r_squared) < 1e-12);
  }

  TEST_CASE("matches the closed form on random data") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0, 0.3);
    std::uniform_real_distribution<double> ux(2, 30);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<double> x(200 + trial), y(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = ux(rng);
        y[i] = 0.19 * x[i] + 1.4 + noise(rng);
      }
      LinearFit f = linfit(x, y);
      oracle::Ols o = oracle::ols(x, y);
      CHECK(f.slope == doctest::Approx(static_cast<double>(o.slope)).epsilon(1e-10));
      CHECK(f.intercept == doctest::Approx(static_cast<double>(o.intercept)).epsilon(1e-10));
      CHECK(f.r_squared == doctest::Approx(static_cast<double>(o.r2)).epsilon(1e-10));
      CHECK(f.slope_err == doctest::Approx(static_cast<double>(o.slope_err)).epsilon(1e-8));
      CHECK(f.intercept_err == doctest::Approx(static_cast<double>(o.intercept_err)).epsilon(1e-8));
      CHECK(f.pearson_r * f.pearson_r == doctest::Approx(f.r_squared).epsilon(1e-12));
      CHECK(f.n == x.size());
    }
  }

  TEST_CASE("linfit errors") {
    std::vector<double> two{1, 2}, flat{1, 1, 1}, y3{1, 2, 3};
    CHECK(error_of([&] { linfit(two, two); }) == ErrorCode::TooFewPoints);
    CHECK(error_of([&] { linfit(flat, y3); }) == ErrorCode::DegenerateX);
    CHECK(error_of([&] { linfit(y3, two); }) == ErrorCode::InvalidArgument);
    LinearFit constant = linfit(y3, flat);
    CHECK(constant.r_squared == 0.0);
    CHECK(constant.slope == 0.0);
  }

  TEST_CASE("log base") {
    CHECK(log_in(std::exp(2.0), LogBase::E) == doctest::Approx(2.0));
    CHECK(log_in(1000.0, LogBase::Ten) == doctest::Approx(3.0));
    CHECK(parse_log_base("10") == LogBase::Ten);
    CHECK(parse_log_base("e") == LogBase::E);
    CHECK_THROWS_AS(parse_log_base("2"), Error);
  }

  TEST_CASE("a_min") {
    std::vector<double> x{1, 2, 4}, y{0.5, 1.6, 2.0};
    CHECK(a_min(x, y) == doctest::Approx(0.8));
    CHECK(a_min_index(x, y) == 1);
    std::vector<double> bad{1, 0, 2};
    CHECK(error_of([&] { a_min(bad, y); }) == ErrorCode::NonpositiveVolume);
    std::vector<double> none;
    CHECK(error_of([&] { a_min(none, none); }) == ErrorCode::EmptyInput);
  }

  TEST_CASE("density fixture") {
    std::vector<double> vol{1, 2, 3, 4};
    std::vector<std::uint64_t> rank{10, 100, 10, 100};
    DensityCurve c = density_f(vol, rank, 50);
    REQUIRE(c.x == std::vector<double>{2, 3, 4});
    CHECK(c.f[0] == doctest::Approx(1.0));
    CHECK(c.f[1] == doctest::Approx(0.5));
    CHECK(c.f[2] == doctest::Approx(2.0 / 3.0));
    CHECK(c.f_infinity == doctest::Approx(0.5));
    DensityCurve none = density_f(vol, rank, 1);
    for (double f : none.f)
      CHECK(f == 0.0);
  }

  TEST_CASE("density curve matches direct counting") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> uv(2, 20);
    std::uniform_int_distribution<std::uint64_t> ur(1, 200);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> vol(300);
      std::vector<std::uint64_t> rank(vol.size());
      for (std::size_t i = 0; i < vol.size(); ++i) {
        vol[i] = std::round(uv(rng) * 4) / 4; // ties on purpose
        rank[i] = ur(rng);
      }
      DensityCurve c = density_f(vol, rank, 50);
      for (std::size_t i = 0; i < c.x.size(); ++i) {
        CHECK(c.f[i] >= 0.0);
        CHECK(c.f[i] <= 1.0);
        CHECK(c.f[i] == doctest::Approx(oracle::density_at(vol, rank, 50, c.x[i])).epsilon(1e-12));
        if (i > 0)
          CHECK(c.x[i - 1] < c.x[i]);
      }
    }
    std::vector<double> neg{-1.0};
    std::vector<std::uint64_t> r1{1};
    CHECK(error_of([&] { density_f(neg, r1, 5); }) == ErrorCode::NonpositiveVolume);
  }

  TEST_CASE("sigmoid evaluation") {
    SigmoidParams p{-0.689, 14.21, 1.02, 1.004};
    CHECK(sigmoid_eval(p, 1.02) == doctest::Approx(0.6595).epsilon(1e-12));
    CHECK(sigmoid_eval(p, 1e6) == doctest::Approx(-0.689 + 1.004));
    CHECK(sigmoid_eval(p, -1e6) == doctest::Approx(1.004));
    CHECK(std::isfinite(sigmoid_eval(SigmoidParams{1, 1e300, 0, 0}, 1.0)));
  }

  TEST_CASE("sigmoid noiseless recovery") {
    SigmoidParams truth{-1, 14, 0.7, 1.0};
    std::vector<double> x, y;
    for (int i = 0; i < 200; ++i) {
      x.push_back(1.4 * i / 199.0);
      y.push_back(oracle::sigmoid(truth.L, truth.k, truth.x0, truth.b, x.back()));
    }
    SigmoidFit fit = sigmoid_fit(x, y);
    CHECK(fit.converged);
    CHECK(std::abs(fit.params.L - truth.L) < 1e-6);
    CHECK(std::abs(fit.params.k - truth.k) < 1e-6);
    CHECK(std::abs(fit.params.x0 - truth.x0) < 1e-6);
    CHECK(std::abs(fit.params.b - truth.b) < 1e-6);
    for (std::size_t i = 1; i < fit.sse_history.size(); ++i)
      CHECK(fit.sse_history[i] <= fit.sse_history[i - 1]);
  }

  TEST_CASE("sigmoid errors") {
    std::vector<double> x{0, 1, 2, 3, 4, 5}, flat(6, 0.5), few{0, 1, 2};
    CHECK(error_of([&] { sigmoid_fit(x, flat); }) == ErrorCode::DegenerateRange);
    CHECK(error_of([&] { sigmoid_fit(few, few); }) == ErrorCode::TooFewPoints);
    std::vector<double> same_x(6, 1.0), y{0, 1, 2, 3, 4, 5};
    CHECK(error_of([&] { sigmoid_fit(same_x, y); }) == ErrorCode::DegenerateX);
    LMControls tight;
    tight.max_iterations = 1;
    std::vector<double> xs, ys;
    for (int i = 0; i < 50; ++i) {
      xs.push_back(i / 49.0);
      ys.push_back(oracle::sigmoid(-1, 14, 0.7, 1, xs.back()));
    }
    CHECK(error_of([&] { sigmoid_fit(xs, ys, SigmoidParams{-0.2, 1, 0.1, 0.3}, tight); }) ==
          ErrorCode::NoConvergence);
  }
}
