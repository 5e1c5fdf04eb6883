#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace knotscope {

enum class LogBase { E, Ten };

double log_in(double v, LogBase base) noexcept;
const char* to_string(LogBase base) noexcept;
// "e", "ln", "natural" / "10", "log10"; throws ParseError otherwise.
LogBase parse_log_base(const std::string& text);

struct LinearFit {
  double slope = 0.0;
  double slope_err = 0.0;
  double intercept = 0.0;
  double intercept_err = 0.0;
  double pearson_r = 0.0;
  double r_squared = 0.0;
  std::size_t n = 0;
};

// Ordinary least squares y = slope * x + intercept. Standard errors use
// s^2 = SSE / (n - 2). Throws TooFewPoints (n < 3), DegenerateX (Sxx = 0),
// InvalidArgument (length mismatch or non-finite input). When all y are
// equal the fit is exact and r = R^2 = 0.
LinearFit linfit(std::span<const double> xs, std::span<const double> ys);

// max_i ys[i] / xs[i]; throws NonpositiveVolume for any xs[i] <= 0 and
// EmptyInput for no points.
double a_min(std::span<const double> xs, std::span<const double> ys);
// Index where a_min is attained (first one on ties).
std::size_t a_min_index(std::span<const double> xs, std::span<const double> ys);

/// f(x) = #{vol < x, rank < d} / #{vol < x} as a right-continuous step
/// function sampled at each distinct volume with at least one record below
/// it, plus its limit at +infinity.
struct DensityCurve {
  std::vector<double> x;
  std::vector<double> f;
  double f_infinity = 0.0;
  std::uint64_t cutoff = 0;
  std::size_t records = 0;
};

// Throws EmptyInput, NonpositiveVolume, InvalidArgument (length mismatch).
DensityCurve density_f(std::span<const double> volumes, std::span<const std::uint64_t> ranks,
                       std::uint64_t d);

struct SigmoidParams {
  double L = 0.0;
  double k = 0.0;
  double x0 = 0.0;
  double b = 0.0;

  std::array<double, 4> as_array() const { return {L, k, x0, b}; }
  static SigmoidParams from_array(const std::array<double, 4>& a) { return {a[0], a[1], a[2], a[3]}; }
};

// L / (1 + exp(-k (x - x0))) + b without overflow for large |k (x - x0)|.
double sigmoid_eval(const SigmoidParams& p, double x) noexcept;

struct LMControls {
  double initial_lambda = 1e-3;
  double lambda_factor = 10.0;
  double max_lambda = 1e16;
  double rel_tolerance = 1e-10;
  int max_iterations = 1000;
};

struct SigmoidFit {
  SigmoidParams params;
  SigmoidParams errors; // one standard deviation each
  double sse = 0.0;
  double gradient_norm = 0.0; // |J^T r|_inf at the optimum
  int iterations = 0;
  bool converged = false;
  std::vector<double> sse_history; // SSE after each accepted step, starting with the initial SSE
};

// Initial guess for a monotone curve: b = max f, L = min f - max f,
// x0 = abscissa whose f is closest to the mid value, k = 10 / x-range.
SigmoidParams sigmoid_initial_guess(std::span<const double> xs, std::span<const double> ys);

// Levenberg-Marquardt with Marquardt diagonal scaling and an analytic
// Jacobian. Errors: TooFewPoints (< 5), DegenerateX, DegenerateRange (flat
// y), SingularJacobian, NoConvergence.
SigmoidFit sigmoid_fit(std::span<const double> xs, std::span<const double> ys,
                       std::optional<SigmoidParams> init = std::nullopt,
                       const LMControls& controls = {});
SigmoidFit sigmoid_fit(const DensityCurve& curve, std::optional<SigmoidParams> init = std::nullopt,
                       const LMControls& controls = {});

} // namespace knotscope
