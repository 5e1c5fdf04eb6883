#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <numeric>
#include <random>
#include <sstream>

#include "knotscope/error.hpp"
#include "knotscope/plot.hpp"

namespace knotscope {

namespace {

const char* const kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string pick_color(const std::string& c, std::size_t i) {
  return c.empty() ? kPalette[i % std::size(kPalette)] : c;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += ch;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v, double step) {
  int digits = step >= 1 ? 0 : static_cast<int>(std::ceil(-std::log10(step)));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", std::clamp(digits, 0, 10), v);
  return buf;
}

double nice_step(double range, int target) {
  double raw = range / target;
  double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw)
      return m * mag;
  return 10 * mag;
}

struct Range {
  double lo = INFINITY, hi = -INFINITY;
  void add(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0;
      hi = 1;
    }
    if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
    double pad = (hi - lo) * 0.04;
    lo -= pad;
    hi += pad;
  }
};

class Canvas {
public:
  Canvas(const PlotOptions& opt, Range xr, Range yr) : opt_(opt), xr_(xr), yr_(yr) {
    left_ = 70;
    right_ = opt.width - 20;
    top_ = opt.title.empty() ? 20 : 40;
    bottom_ = opt.height - 55;
  }

  double px(double x) const { return left_ + (x - xr_.lo) / (xr_.hi - xr_.lo) * (right_ - left_); }
  double py(double y) const { return bottom_ - (y - yr_.lo) / (yr_.hi - yr_.lo) * (bottom_ - top_); }

  void header(std::ostringstream& os, const std::string& metadata) const {
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt_.width << "\" height=\""
       << opt_.height << "\" viewBox=\"0 0 " << opt_.width << " " << opt_.height << "\">\n";
    if (opt_.timestamp) {
      std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      char buf[64];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
      os << "<!-- generated " << buf << " -->\n";
    }
    if (!metadata.empty())
      os << "<metadata>" << escape(metadata) << "</metadata>\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  }

  void axes(std::ostringstream& os) const {
    os << "<rect x=\"" << num(left_) << "\" y=\"" << num(top_) << "\" width=\"" << num(right_ - left_)
       << "\" height=\"" << num(bottom_ - top_) << "\" fill=\"none\" stroke=\"black\"/>\n";
    double xs = nice_step(xr_.hi - xr_.lo, 8);
    for (double t = std::ceil(xr_.lo / xs) * xs; t <= xr_.hi + 1e-12 * xs; t += xs) {
      double x = px(t);
      os << "<line x1=\"" << num(x) << "\" y1=\"" << num(bottom_) << "\" x2=\"" << num(x)
         << "\" y2=\"" << num(bottom_ + 5) << "\" stroke=\"black\"/>";
      os << "<text x=\"" << num(x) << "\" y=\"" << num(bottom_ + 18)
         << "\" text-anchor=\"middle\">" << tick_label(t, xs) << "</text>\n";
    }
    double ys = nice_step(yr_.hi - yr_.lo, 6);
    for (double t = std::ceil(yr_.lo / ys) * ys; t <= yr_.hi + 1e-12 * ys; t += ys) {
      double y = py(t);
      os << "<line x1=\"" << num(left_ - 5) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left_)
         << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>";
      os << "<text x=\"" << num(left_ - 8) << "\" y=\"" << num(y + 4)
         << "\" text-anchor=\"end\">" << tick_label(t, ys) << "</text>\n";
    }
    if (!opt_.title.empty())
      os << "<text x=\"" << num((left_ + right_) / 2) << "\" y=\"24\" text-anchor=\"middle\" "
         << "font-size=\"15\">" << escape(opt_.title) << "</text>\n";
    if (!opt_.xlabel.empty())
      os << "<text x=\"" << num((left_ + right_) / 2) << "\" y=\"" << num(opt_.height - 15)
         << "\" text-anchor=\"middle\">" << escape(opt_.xlabel) << "</text>\n";
    if (!opt_.ylabel.empty())
      os << "<text transform=\"translate(18," << num((top_ + bottom_) / 2)
         << ") rotate(-90)\" text-anchor=\"middle\">" << escape(opt_.ylabel) << "</text>\n";
  }

  void legend(std::ostringstream& os, const std::vector<std::pair<std::string, std::string>>& items) const {
    double y = top_ + 16;
    for (const auto& [label, color] : items) {
      if (label.empty())
        continue;
      os << "<rect x=\"" << num(right_ - 150) << "\" y=\"" << num(y - 9) << "\" width=\"10\" height=\"10\" fill=\""
         << color << "\"/><text x=\"" << num(right_ - 135) << "\" y=\"" << num(y) << "\">" << escape(label)
         << "</text>\n";
      y += 16;
    }
  }

  void polyline(std::ostringstream& os, const std::vector<double>& x, const std::vector<double>& y,
                const std::string& color, bool step, double width = 1.5) const {
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width << "\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (step && i > 0)
        os << num(px(x[i])) << "," << num(py(y[i - 1])) << " ";
      os << num(px(x[i])) << "," << num(py(y[i])) << " ";
    }
    os << "\"/>\n";
  }

  static std::string finish(std::ostringstream& os) {
    os << "</g>\n</svg>\n";
    return os.str();
  }

private:
  const PlotOptions& opt_;
  Range xr_, yr_;
  double left_, right_, top_, bottom_;
};

} // namespace

std::string svg_scatter(const std::vector<PointSeries>& points, const std::vector<LineSeries>& lines,
                        const PlotOptions& opt) {
  std::size_t total = 0;
  for (const auto& s : points) {
    if (s.x.size() != s.y.size())
      fail(ErrorCode::InvalidArgument, "series '" + s.label + "' has mismatched x and y");
    total += s.x.size();
  }
  Range xr, yr;
  for (const auto& s : points)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xr.add(s.x[i]);
      yr.add(s.y[i]);
    }
  for (const auto& l : lines) {
    for (double v : l.y)
      yr.add(v);
    if (points.empty())
      for (double v : l.x)
        xr.add(v);
  }
  xr.finish();
  yr.finish();

  // Per-series sample sizes proportional to length; one RNG stream.
  const bool down = total > opt.max_points;
  std::mt19937_64 rng(opt.seed);
  std::vector<std::vector<std::size_t>> keep(points.size());
  std::size_t shown = 0;
  for (std::size_t s = 0; s < points.size(); ++s) {
    std::vector<std::size_t> all(points[s].x.size());
    std::iota(all.begin(), all.end(), 0);
    if (down) {
      auto k = static_cast<std::size_t>(static_cast<double>(opt.max_points) *
                                        static_cast<double>(all.size()) / static_cast<double>(total));
      std::sample(all.begin(), all.end(), std::back_inserter(keep[s]), k, rng);
    } else {
      keep[s] = std::move(all);
    }
    shown += keep[s].size();
  }
  std::string meta = "{\"points_total\": " + std::to_string(total) +
                     ", \"points_shown\": " + std::to_string(shown) +
                     ", \"downsampled\": " + (down ? "true" : "false");
  if (down)
    meta += ", \"seed\": " + std::to_string(opt.seed);
  meta += "}";

  Canvas cv(opt, xr, yr);
  std::ostringstream os;
  cv.header(os, meta);
  cv.axes(os);
  std::vector<std::pair<std::string, std::string>> legend;
  for (std::size_t s = 0; s < points.size(); ++s) {
    std::string color = pick_color(points[s].color, s);
    legend.emplace_back(points[s].label, color);
    os << "<g fill=\"" << color << "\" fill-opacity=\"0.5\">\n";
    for (std::size_t i : keep[s])
      os << "<circle cx=\"" << num(cv.px(points[s].x[i])) << "\" cy=\"" << num(cv.py(points[s].y[i]))
         << "\" r=\"1.6\"/>\n";
    os << "</g>\n";
  }
  for (std::size_t l = 0; l < lines.size(); ++l) {
    std::string color = pick_color(lines[l].color, points.size() + l);
    legend.emplace_back(lines[l].label, color);
    cv.polyline(os, lines[l].x, lines[l].y, color, lines[l].step, 2.0);
  }
  cv.legend(os, legend);
  return Canvas::finish(os);
}

std::string svg_histogram(const std::vector<std::pair<std::string, Histogram>>& hists,
                          const PlotOptions& opt) {
  Range xr, yr;
  yr.add(0);
  for (const auto& [label, h] : hists) {
    for (double e : h.edges)
      xr.add(e);
    for (double d : h.density)
      yr.add(d);
  }
  xr.finish();
  yr.finish();
  Canvas cv(opt, xr, yr);
  std::ostringstream os;
  cv.header(os, "{\"series\": " + std::to_string(hists.size()) + "}");
  cv.axes(os);
  std::vector<std::pair<std::string, std::string>> legend;
  for (std::size_t s = 0; s < hists.size(); ++s) {
    const auto& [label, h] = hists[s];
    std::string color = pick_color("", s);
    legend.emplace_back(label, color);
    os << "<g fill=\"" << color << "\" fill-opacity=\"0.35\" stroke=\"" << color << "\">\n";
    for (std::size_t i = 0; i < h.bins(); ++i) {
      if (h.density[i] <= 0)
        continue;
      double x0 = cv.px(h.edges[i]), x1 = cv.px(h.edges[i + 1]);
      double y0 = cv.py(h.density[i]), y1 = cv.py(0);
      os << "<rect x=\"" << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0)
         << "\" height=\"" << num(y1 - y0) << "\"/>\n";
    }
    os << "</g>\n";
  }
  cv.legend(os, legend);
  return Canvas::finish(os);
}

std::string svg_density(const DensityCurve& curve, const std::optional<SigmoidParams>& fit,
                        const PlotOptions& opt) {
  std::vector<LineSeries> lines;
  LineSeries step{"f(x), d=" + std::to_string(curve.cutoff), {}, {}, "#1f77b4", true};
  // Deterministic thinning keeps large curves drawable; the last sample stays.
  const std::size_t stride = std::max<std::size_t>(1, curve.x.size() / std::max<std::size_t>(1, opt.max_points));
  for (std::size_t i = 0; i < curve.x.size(); i += stride) {
    step.x.push_back(curve.x[i]);
    step.y.push_back(curve.f[i]);
  }
  if (!curve.x.empty() && step.x.back() != curve.x.back()) {
    step.x.push_back(curve.x.back());
    step.y.push_back(curve.f.back());
  }
  lines.push_back(std::move(step));
  if (fit && !curve.x.empty()) {
    LineSeries g{"sigmoid fit", {}, {}, "#d62728", false};
    const double lo = curve.x.front(), hi = curve.x.back();
    for (int i = 0; i <= 400; ++i) {
      double x = lo + (hi - lo) * i / 400.0;
      g.x.push_back(x);
      g.y.push_back(sigmoid_eval(*fit, x));
    }
    lines.push_back(std::move(g));
  }
  return svg_scatter({}, lines, opt);
}

} // namespace knotscope
