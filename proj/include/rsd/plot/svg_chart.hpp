#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "rsd/error.hpp"

namespace rsd::plot {

inline constexpr double kLogFloor = 1e-16;

inline const std::vector<std::string>& palette() {
  static const std::vector<std::string> colors = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                                  "#bcbd22", "#17becf"};
  return colors;
}

struct Series {
  std::string label;
  std::vector<double> y;  // y[i] plotted at x = i
};

struct Panel {
  std::string title;
  std::vector<Series> series;
};

struct ChartOptions {
  std::string title;
  std::string x_label = "iteration";
  std::string y_label = "mean relative error";
  /// Polylines keep at most this many vertices per series.
  std::size_t max_points = 600;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline double clamp_log(double v) {
  if (!std::isfinite(v)) return v > 0 ? 0.0 : std::log10(kLogFloor);
  return std::log10(std::max(v, kLogFloor));
}

inline std::vector<std::size_t> decimate(std::size_t len, std::size_t max_points) {
  std::vector<std::size_t> idx;
  if (len == 0) return idx;
  if (len <= max_points || max_points < 2) {
    for (std::size_t i = 0; i < len; ++i) idx.push_back(i);
    return idx;
  }
  const double step = static_cast<double>(len - 1) / static_cast<double>(max_points - 1);
  for (std::size_t i = 0; i < max_points; ++i) {
    const auto j = static_cast<std::size_t>(std::llround(step * static_cast<double>(i)));
    if (idx.empty() || idx.back() != j) idx.push_back(j);
  }
  return idx;
}

// Draws one panel into the box (x0, y0, w, h).
inline void draw_panel(std::ostringstream& os, const Panel& panel, const ChartOptions& opt,
                       double x0, double y0, double w, double h) {
  const double left = x0 + 60, right = x0 + w - 150, top = y0 + 30, bottom = y0 + h - 40;
  std::size_t x_max = 1;
  double lo = 0.0, hi = -16.0;
  for (const Series& s : panel.series) {
    if (s.y.size() > 1) x_max = std::max(x_max, s.y.size() - 1);
    for (double v : s.y) {
      const double l = clamp_log(v);
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
  }
  const double dec_lo = std::floor(lo), dec_hi = std::max(std::ceil(hi), dec_lo + 1);
  auto px = [&](double x) { return left + (right - left) * x / static_cast<double>(x_max); };
  auto py = [&](double ly) { return bottom - (bottom - top) * (ly - dec_lo) / (dec_hi - dec_lo); };

  os << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(right - left)
     << "\" height=\"" << num(bottom - top) << "\" fill=\"none\" stroke=\"#000\"/>\n";
  const int decades = static_cast<int>(dec_hi - dec_lo);
  const int label_every = std::max(1, decades / 8);
  for (int d = 0; d <= decades; ++d) {
    const double e = dec_lo + d;
    os << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(e)) << "\" x2=\"" << num(right)
       << "\" y2=\"" << num(py(e)) << "\" stroke=\"#ddd\"/>\n";
    if (d % label_every == 0) {
      os << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(e) + 4)
         << "\" font-size=\"11\" text-anchor=\"end\">1e" << static_cast<int>(e) << "</text>\n";
    }
  }
  for (int i = 0; i <= 4; ++i) {
    const double xv = static_cast<double>(x_max) * i / 4.0;
    os << "<text x=\"" << num(px(xv)) << "\" y=\"" << num(bottom + 16)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << std::llround(xv) << "</text>\n";
  }
  os << "<text x=\"" << num((left + right) / 2) << "\" y=\"" << num(bottom + 32)
     << "\" font-size=\"12\" text-anchor=\"middle\">" << escape(opt.x_label) << "</text>\n";
  os << "<text x=\"" << num(x0 + 14) << "\" y=\"" << num((top + bottom) / 2)
     << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 " << num(x0 + 14) << ' '
     << num((top + bottom) / 2) << ")\">" << escape(opt.y_label) << "</text>\n";
  if (!panel.title.empty()) {
    os << "<text x=\"" << num((left + right) / 2) << "\" y=\"" << num(top - 10)
       << "\" font-size=\"13\" text-anchor=\"middle\">" << escape(panel.title) << "</text>\n";
  }

  const auto& colors = palette();
  for (std::size_t si = 0; si < panel.series.size(); ++si) {
    const Series& s = panel.series[si];
    const std::string& color = colors[si % colors.size()];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i : decimate(s.y.size(), opt.max_points)) {
      if (!first) os << ' ';
      first = false;
      os << num(px(static_cast<double>(i))) << ',' << num(py(clamp_log(s.y[i])));
    }
    os << "\"/>\n";
    const double ly = top + 10 + 16.0 * static_cast<double>(si);
    os << "<line x1=\"" << num(right + 10) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(right + 30)
       << "\" y2=\"" << num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num(right + 35) << "\" y=\"" << num(ly + 4) << "\" font-size=\"11\">"
       << escape(s.label) << "</text>\n";
  }
}

}  // namespace detail

/// Log-scale line chart on a fixed 800×500 viewBox; several panels are laid
/// out on a grid inside the same viewBox.
inline std::string render_svg(const std::vector<Panel>& panels, const ChartOptions& opt = {}) {
  if (panels.empty()) throw Error("render_svg: no panels");
  constexpr double kWidth = 800, kHeight = 500;
  const std::size_t cols = panels.size() == 1 ? 1 : 2;
  const std::size_t rows = (panels.size() + cols - 1) / cols;
  const double title_h = opt.title.empty() ? 0.0 : 24.0;
  const double cell_w = kWidth / static_cast<double>(cols);
  const double cell_h = (kHeight - title_h) / static_cast<double>(rows);

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" height=\"500\""
        " font-family=\"sans-serif\">\n";
  os << "<rect width=\"800\" height=\"500\" fill=\"#fff\"/>\n";
  if (!opt.title.empty()) {
    os << "<text x=\"400\" y=\"17\" font-size=\"15\" text-anchor=\"middle\">"
       << detail::escape(opt.title) << "</text>\n";
  }
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const double x0 = cell_w * static_cast<double>(i % cols);
    const double y0 = title_h + cell_h * static_cast<double>(i / cols);
    detail::draw_panel(os, panels[i], opt, x0, y0, cell_w, cell_h);
  }
  os << "</svg>\n";
  return os.str();
}

inline std::string render_svg(const Panel& panel, const ChartOptions& opt = {}) {
  return render_svg(std::vector<Panel>{panel}, opt);
}

}  // namespace rsd::plot
