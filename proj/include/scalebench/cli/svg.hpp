#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "scalebench/error.hpp"
#include "scalebench/scaling/fit.hpp"
#include "scalebench/scaling/series.hpp"

namespace scalebench::cli {

struct PlotSeries {
  std::string label;
  std::vector<scaling::Point> points;
  scaling::PowerLawFit fit;
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace detail

// Log-log scatter with one fitted line per series.
inline std::string render_loglog_svg(const std::vector<PlotSeries>& series, const std::string& title,
                                     const std::string& x_label, const std::string& y_label) {
  if (series.empty()) fail(ErrorKind::InsufficientData, "nothing to plot");
  constexpr double W = 720, H = 480, L = 70, R = 170, T = 40, B = 60;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      x0 = std::min(x0, std::log10(p.x));
      x1 = std::max(x1, std::log10(p.x));
      y0 = std::min(y0, std::log10(p.y));
      y1 = std::max(y1, std::log10(p.y));
    }
  }
  if (x1 - x0 < 1e-9) x1 = x0 + 1;
  if (y1 - y0 < 1e-9) y1 = y0 + 1;
  const double pad_y = 0.05 * (y1 - y0);
  y0 -= pad_y;
  y1 += pad_y;
  auto px = [&](double x) { return L + (std::log10(x) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (std::log10(y) - y0) / (y1 - y0) * (H - T - B); };

  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  using detail::num;
  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) +
         "\" viewBox=\"0 0 " + num(W) + " " + num(H) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         detail::escape_xml(title) + "</text>\n";
  out += "<rect x=\"" + num(L) + "\" y=\"" + num(T) + "\" width=\"" + num(W - L - R) + "\" height=\"" +
         num(H - T - B) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(std::ceil(x0)); d <= static_cast<int>(std::floor(x1)); ++d) {
    const double x = px(std::pow(10.0, d));
    out += "<line x1=\"" + num(x) + "\" y1=\"" + num(H - B) + "\" x2=\"" + num(x) + "\" y2=\"" + num(H - B + 5) +
           "\" stroke=\"black\"/><text x=\"" + num(x) + "\" y=\"" + num(H - B + 18) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">1e" + std::to_string(d) + "</text>\n";
  }
  for (int d = static_cast<int>(std::ceil(y0)); d <= static_cast<int>(std::floor(y1)); ++d) {
    const double y = py(std::pow(10.0, d));
    out += "<line x1=\"" + num(L - 5) + "\" y1=\"" + num(y) + "\" x2=\"" + num(L) + "\" y2=\"" + num(y) +
           "\" stroke=\"black\"/><text x=\"" + num(L - 8) + "\" y=\"" + num(y + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e" + std::to_string(d) + "</text>\n";
  }
  out += "<text x=\"" + num(L + (W - L - R) / 2) + "\" y=\"" + num(H - 15) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + detail::escape_xml(x_label) +
         "</text>\n";
  out += "<text x=\"16\" y=\"" + num(T + (H - T - B) / 2) + "\" transform=\"rotate(-90 16 " +
         num(T + (H - T - B) / 2) + ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         detail::escape_xml(y_label) + "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const std::string color = palette[i % std::size(palette)];
    const double xa = std::pow(10.0, x0), xb = std::pow(10.0, x1);
    const double ya = scaling::predict(s.fit, xa), yb = scaling::predict(s.fit, xb);
    out += "<line x1=\"" + num(px(xa)) + "\" y1=\"" + num(py(ya)) + "\" x2=\"" + num(px(xb)) + "\" y2=\"" +
           num(py(yb)) + "\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    for (const auto& p : s.points) {
      out += "<circle cx=\"" + num(px(p.x)) + "\" cy=\"" + num(py(p.y)) + "\" r=\"3.5\" fill=\"" + color + "\"/>\n";
    }
    const double ly = T + 14 + 16 * static_cast<double>(i);
    char r2[32];
    std::snprintf(r2, sizeof r2, "%.3f", s.fit.r_squared);
    out += "<text x=\"" + num(W - R + 10) + "\" y=\"" + num(ly) + "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" +
           color + "\">" + detail::escape_xml(s.label) + " (R2=" + r2 + ")</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace scalebench::cli
