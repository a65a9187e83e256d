#ifndef MANCALA_FLOW_SVG_HPP
#define MANCALA_FLOW_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <tuple>
#include <string>
#include <vector>

#include "polygonal.hpp"

namespace mancala_flow {

struct PlotPoint {
  double x;
  double y;
  bool jump = false;  // segment arriving here is a jump vertical
};

struct PlotSeries {
  std::string label;
  std::vector<PlotPoint> points;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  std::optional<std::pair<double, double>> x_range;
  std::optional<std::pair<double, double>> y_range;
};

template <Scalar S>
PlotSeries make_series(const std::string& label, const Polygonal<S>& f, const S& a, const S& b) {
  PlotSeries s{label, {}};
  for (const auto& v : generalized_graph(f, a, b).vertices) s.points.push_back({to_double(v.t), to_double(v.s), v.jump});
  return s;
}

template <Scalar S>
PlotSeries make_series(const std::string& label, const PlanarChain<S>& c) {
  PlotSeries s{label, {}};
  for (const auto& v : c.vertices) s.points.push_back({to_double(v.t), to_double(v.s), v.jump});
  return s;
}

namespace detail {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", std::abs(v) < 1e-12 ? 0.0 : v);
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

}  // namespace detail

/// Standalone SVG (800x500): axes, one polyline per series, dashed jump verticals, legend.
inline std::string render_svg(const std::vector<PlotSeries>& series, const PlotOptions& opt = {}) {
  constexpr double W = 800, H = 500, L = 70, R = 150, T = 40, B = 50;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool any = false;
  for (const auto& s : series)
    for (const auto& p : s.points) {
      if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
      if (!any) { x0 = x1 = p.x; y0 = y1 = p.y; any = true; }
      x0 = std::min(x0, p.x); x1 = std::max(x1, p.x);
      y0 = std::min(y0, p.y); y1 = std::max(y1, p.y);
    }
  y0 = std::min(y0, 0.0);
  if (opt.x_range) std::tie(x0, x1) = *opt.x_range;
  if (opt.y_range) std::tie(y0, y1) = *opt.y_range;
  if (!(x1 > x0)) x1 = x0 + 1;
  if (!(y1 > y0)) y1 = y0 + 1;
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 500\" width=\"800\" height=\"500\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
  if (!opt.title.empty())
    os << "<text x=\"" << detail::fmt(W / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
       << detail::escape(opt.title) << "</text>\n";
  os << "<g stroke=\"black\" stroke-width=\"1\">\n";
  os << "<line x1=\"" << detail::fmt(L) << "\" y1=\"" << detail::fmt(H - B) << "\" x2=\"" << detail::fmt(W - R)
     << "\" y2=\"" << detail::fmt(H - B) << "\"/>\n";
  os << "<line x1=\"" << detail::fmt(L) << "\" y1=\"" << detail::fmt(T) << "\" x2=\"" << detail::fmt(L) << "\" y2=\""
     << detail::fmt(H - B) << "\"/>\n";
  os << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int k = 0; k <= 5; ++k) {
    double xv = x0 + (x1 - x0) * k / 5.0, yv = y0 + (y1 - y0) * k / 5.0;
    os << "<line x1=\"" << detail::fmt(sx(xv)) << "\" y1=\"" << detail::fmt(H - B) << "\" x2=\"" << detail::fmt(sx(xv))
       << "\" y2=\"" << detail::fmt(H - B + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << detail::fmt(sx(xv)) << "\" y=\"" << detail::fmt(H - B + 18) << "\" text-anchor=\"middle\">"
       << detail::tick_label(xv) << "</text>\n";
    os << "<line x1=\"" << detail::fmt(L - 5) << "\" y1=\"" << detail::fmt(sy(yv)) << "\" x2=\"" << detail::fmt(L)
       << "\" y2=\"" << detail::fmt(sy(yv)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << detail::fmt(L - 8) << "\" y=\"" << detail::fmt(sy(yv) + 4) << "\" text-anchor=\"end\">"
       << detail::tick_label(yv) << "</text>\n";
  }
  os << "<text x=\"" << detail::fmt((L + W - R) / 2) << "\" y=\"" << detail::fmt(H - 10) << "\" text-anchor=\"middle\">"
     << detail::escape(opt.x_label) << "</text>\n";
  os << "<text x=\"16\" y=\"" << detail::fmt((T + H - B) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
     << detail::fmt((T + H - B) / 2) << ")\">" << detail::escape(opt.y_label) << "</text>\n";
  os << "</g>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* color = palette[k % 8];
    os << "<g fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\">\n";
    std::vector<PlotPoint> run;
    auto flush = [&] {
      if (run.size() >= 2) {
        os << "<polyline points=\"";
        for (std::size_t i = 0; i < run.size(); ++i) os << (i ? " " : "") << detail::fmt(sx(run[i].x)) << ',' << detail::fmt(sy(run[i].y));
        os << "\"/>\n";
      }
      run.clear();
    };
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const auto& p = s.points[i];
      if (p.jump && i > 0) {
        flush();
        const auto& q = s.points[i - 1];
        os << "<line x1=\"" << detail::fmt(sx(q.x)) << "\" y1=\"" << detail::fmt(sy(q.y)) << "\" x2=\"" << detail::fmt(sx(p.x))
           << "\" y2=\"" << detail::fmt(sy(p.y)) << "\" stroke-dasharray=\"4 3\"/>\n";
      }
      run.push_back(p);
    }
    flush();
    os << "</g>\n";
    double ly = T + 16 + 18.0 * static_cast<double>(k);
    os << "<line x1=\"" << detail::fmt(W - R + 12) << "\" y1=\"" << detail::fmt(ly) << "\" x2=\"" << detail::fmt(W - R + 36)
       << "\" y2=\"" << detail::fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << detail::fmt(W - R + 42) << "\" y=\"" << detail::fmt(ly + 4)
       << "\" font-family=\"sans-serif\" font-size=\"12\">" << detail::escape(s.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace mancala_flow

#endif  // MANCALA_FLOW_SVG_HPP
