#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "knotscope/error.hpp"
#include "knotscope/stats.hpp"
#include "knotscope/summation.hpp"

namespace knotscope {

double log_in(double v, LogBase base) noexcept {
  return base == LogBase::E ? std::log(v) : std::log10(v);
}

const char* to_string(LogBase base) noexcept { return base == LogBase::E ? "e" : "10"; }

LogBase parse_log_base(const std::string& text) {
  if (text == "e" || text == "ln" || text == "natural")
    return LogBase::E;
  if (text == "10" || text == "log10")
    return LogBase::Ten;
  fail(ErrorCode::ParseError, "log base must be e or 10, got '" + text + "'");
}

namespace {

void check_pairs(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    fail(ErrorCode::InvalidArgument, "x and y have different lengths");
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i]))
      fail(ErrorCode::InvalidArgument, "non-finite value at index " + std::to_string(i));
}

} // namespace

// Two passes: means first, then centred sums, all compensated.
LinearFit linfit(std::span<const double> xs, std::span<const double> ys) {
  check_pairs(xs, ys);
  const std::size_t n = xs.size();
  if (n < 3)
    fail(ErrorCode::TooFewPoints, "linear fit needs at least 3 points, got " + std::to_string(n));
  NeumaierSum sx, sy;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double dn = static_cast<double>(n);
  const double mx = sx.value() / dn;
  const double my = sy.value() / dn;
  NeumaierSum sxx, syy, sxy;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  const double Sxx = sxx.value(), Syy = syy.value(), Sxy = sxy.value();
  if (!(Sxx > 0))
    fail(ErrorCode::DegenerateX, "x values have zero variance");

  LinearFit fit;
  fit.n = n;
  fit.slope = Sxy / Sxx;
  fit.intercept = my - fit.slope * mx;
  NeumaierSum sse;
  for (std::size_t i = 0; i < n; ++i) {
    double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    sse += r * r;
  }
  // Residuals of an exact fit are rounding noise; SSE cannot exceed Syy.
  double SSE = std::min(sse.value(), Syy);
  const double s2 = SSE / (dn - 2.0);
  fit.slope_err = std::sqrt(s2 / Sxx);
  fit.intercept_err = std::sqrt(s2 * (1.0 / dn + mx * mx / Sxx));
  if (Syy > 0) {
    fit.pearson_r = std::clamp(Sxy / std::sqrt(Sxx * Syy), -1.0, 1.0);
    fit.r_squared = fit.pearson_r * fit.pearson_r;
  }
  return fit;
}

std::size_t a_min_index(std::span<const double> xs, std::span<const double> ys) {
  check_pairs(xs, ys);
  if (xs.empty())
    fail(ErrorCode::EmptyInput, "a_min of no points");
  std::size_t best = 0;
  double best_ratio = -INFINITY;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0))
      fail(ErrorCode::NonpositiveVolume, "volume at index " + std::to_string(i) + " is not positive");
    double r = ys[i] / xs[i];
    if (r > best_ratio) {
      best_ratio = r;
      best = i;
    }
  }
  return best;
}

double a_min(std::span<const double> xs, std::span<const double> ys) {
  std::size_t i = a_min_index(xs, ys);
  return ys[i] / xs[i];
}

DensityCurve density_f(std::span<const double> volumes, std::span<const std::uint64_t> ranks,
                       std::uint64_t d) {
  if (volumes.size() != ranks.size())
    fail(ErrorCode::InvalidArgument, "volumes and ranks have different lengths");
  if (volumes.empty())
    fail(ErrorCode::EmptyInput, "density curve of no records");
  std::vector<std::size_t> order(volumes.size());
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < volumes.size(); ++i)
    if (!(volumes[i] > 0) || !std::isfinite(volumes[i]))
      fail(ErrorCode::NonpositiveVolume, "volume at index " + std::to_string(i) + " is not positive");
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return volumes[a] < volumes[b] || (volumes[a] == volumes[b] && a < b);
  });

  DensityCurve curve;
  curve.cutoff = d;
  curve.records = volumes.size();
  std::size_t below = 0, below_small = 0;
  for (std::size_t pos = 0; pos < order.size();) {
    const double v = volumes[order[pos]];
    if (below > 0) {
      curve.x.push_back(v);
      curve.f.push_back(static_cast<double>(below_small) / static_cast<double>(below));
    }
    while (pos < order.size() && volumes[order[pos]] == v) {
      ++below;
      below_small += ranks[order[pos]] < d;
      ++pos;
    }
  }
  curve.f_infinity = static_cast<double>(below_small) / static_cast<double>(below);
  return curve;
}

double sigmoid_eval(const SigmoidParams& p, double x) noexcept {
  const double z = -p.k * (x - p.x0);
  // 1 / (1 + e^z), evaluated on whichever side keeps the exponent <= 0.
  double s;
  if (z > 0) {
    double e = std::exp(-z);
    s = e / (1.0 + e);
  } else {
    s = 1.0 / (1.0 + std::exp(z));
  }
  return p.L * s + p.b;
}

namespace {

// Logistic s(x) = 1 / (1 + exp(-k (x - x0))) in stable form.
double logistic(double k, double x0, double x) noexcept {
  return sigmoid_eval(SigmoidParams{1.0, k, x0, 0.0}, x);
}

struct Evaluation {
  double sse = 0.0;
  Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
  Eigen::Vector4d jtr = Eigen::Vector4d::Zero();
};

double sse_at(std::span<const double> xs, std::span<const double> ys, const SigmoidParams& p) {
  NeumaierSum sse;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - sigmoid_eval(p, xs[i]);
    sse += r * r;
  }
  return sse.value();
}

// dg/dL = s, dg/dk = L s (1-s) (x - x0), dg/dx0 = -L s (1-s) k, dg/db = 1.
Evaluation evaluate(std::span<const double> xs, std::span<const double> ys, const SigmoidParams& p) {
  Evaluation ev;
  NeumaierSum sse;
  std::array<NeumaierSum, 10> a{};
  std::array<NeumaierSum, 4> g{};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double s = logistic(p.k, p.x0, xs[i]);
    const double ds = s * (1.0 - s);
    const double r = ys[i] - (p.L * s + p.b);
    const double j[4] = {s, p.L * ds * (xs[i] - p.x0), -p.L * ds * p.k, 1.0};
    sse += r * r;
    int t = 0;
    for (int u = 0; u < 4; ++u) {
      g[u] += j[u] * r;
      for (int v = u; v < 4; ++v)
        a[t++] += j[u] * j[v];
    }
  }
  ev.sse = sse.value();
  int t = 0;
  for (int u = 0; u < 4; ++u) {
    ev.jtr(u) = g[u].value();
    for (int v = u; v < 4; ++v) {
      ev.jtj(u, v) = ev.jtj(v, u) = a[t++].value();
    }
  }
  return ev;
}

} // namespace

SigmoidParams sigmoid_initial_guess(std::span<const double> xs, std::span<const double> ys) {
  check_pairs(xs, ys);
  if (xs.empty())
    fail(ErrorCode::EmptyInput, "sigmoid initial guess of no points");
  auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  const double mid = (*ymax + *ymin) / 2.0;
  std::size_t best = 0;
  for (std::size_t i = 1; i < ys.size(); ++i)
    if (std::fabs(ys[i] - mid) < std::fabs(ys[best] - mid))
      best = i;
  const double range = *xmax - *xmin;
  return SigmoidParams{*ymin - *ymax, range > 0 ? 10.0 / range : 1.0, xs[best], *ymax};
}

SigmoidFit sigmoid_fit(std::span<const double> xs, std::span<const double> ys,
                       std::optional<SigmoidParams> init, const LMControls& ctl) {
  check_pairs(xs, ys);
  const std::size_t n = xs.size();
  if (n < 5)
    fail(ErrorCode::TooFewPoints, "sigmoid fit needs at least 5 points, got " + std::to_string(n));
  auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
  if (!(*xmax > *xmin))
    fail(ErrorCode::DegenerateX, "sigmoid fit needs a nondegenerate x-range");
  auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
  if (!(*ymax > *ymin))
    fail(ErrorCode::DegenerateRange, "curve is flat; a sigmoid is not identifiable");

  SigmoidFit fit;
  SigmoidParams p = init.value_or(sigmoid_initial_guess(xs, ys));
  double lambda = ctl.initial_lambda;
  Evaluation ev = evaluate(xs, ys, p);
  fit.sse_history.push_back(ev.sse);

  bool done = false;
  int it = 0;
  for (; it < ctl.max_iterations && !done; ++it) {
    if (ev.sse == 0.0) {
      done = true;
      break;
    }
    const Eigen::Vector4d diag = ev.jtj.diagonal();
    if ((diag.array() <= 0.0).any())
      fail(ErrorCode::SingularJacobian, "a sigmoid parameter has no influence on the residuals");
    // Inner loop: raise damping until a step reduces the SSE.
    while (true) {
      Eigen::Matrix4d a = ev.jtj;
      a.diagonal() += lambda * diag;
      Eigen::Vector4d delta = a.ldlt().solve(ev.jtr);
      std::array<double, 4> q = p.as_array();
      for (int u = 0; u < 4; ++u)
        q[u] += delta(u);
      SigmoidParams candidate = SigmoidParams::from_array(q);
      double sse_new = delta.allFinite() ? sse_at(xs, ys, candidate) : INFINITY;
      if (sse_new < ev.sse) {
        const double rel = (ev.sse - sse_new) / ev.sse;
        p = candidate;
        ev = evaluate(xs, ys, p);
        fit.sse_history.push_back(ev.sse);
        lambda = std::max(lambda / ctl.lambda_factor, 1e-300);
        if (rel < ctl.rel_tolerance)
          done = true;
        break;
      }
      lambda *= ctl.lambda_factor;
      if (lambda > ctl.max_lambda) {
        // No descent direction left at working precision: a minimum.
        done = true;
        break;
      }
    }
  }
  if (!done)
    fail(ErrorCode::NoConvergence, "sigmoid fit did not converge in " +
                                       std::to_string(ctl.max_iterations) + " iterations");

  fit.params = p;
  fit.sse = ev.sse;
  fit.iterations = it;
  fit.converged = true;
  fit.gradient_norm = ev.jtr.lpNorm<Eigen::Infinity>();

  Eigen::FullPivLU<Eigen::Matrix4d> lu(ev.jtj);
  if (lu.rank() < 4)
    fail(ErrorCode::SingularJacobian, "J^T J is singular at the optimum");
  const double s2 = n > 4 ? fit.sse / static_cast<double>(n - 4) : 0.0;
  Eigen::Matrix4d cov = lu.inverse() * s2;
  std::array<double, 4> err{};
  for (int u = 0; u < 4; ++u)
    err[u] = std::sqrt(std::max(0.0, cov(u, u)));
  fit.errors = SigmoidParams::from_array(err);
  return fit;
}

SigmoidFit sigmoid_fit(const DensityCurve& curve, std::optional<SigmoidParams> init,
                       const LMControls& controls) {
  return sigmoid_fit(curve.x, curve.f, init, controls);
}

} // namespace knotscope
