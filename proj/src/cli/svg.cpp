#include "maillard/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace maillard::svg {

namespace {

constexpr double kWidth = 640, kHeight = 400;
constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 80;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

const char* kStyle =
    "<style>\n"
    "  .bar { fill: #4c72b0; stroke: #1f2f4f; }\n"
    "  .bar.no-guarantee { fill: #b0b0b0; }\n"
    "  .bar.fixed-budget { fill: url(#hatch); }\n"
    "  .errbar { stroke: #000; stroke-width: 1.5; }\n"
    "  .point { fill: #c44e52; }\n"
    "  .trend { fill: none; stroke: #c44e52; stroke-width: 1.5; }\n"
    "  .axis { stroke: #000; }\n"
    "  .grid { stroke: #ddd; }\n"
    "  text { font-family: sans-serif; font-size: 11px; }\n"
    "  .title { font-size: 14px; }\n"
    "</style>\n";

const char* kDefs =
    "<defs>\n"
    "  <pattern id=\"hatch\" patternUnits=\"userSpaceOnUse\" width=\"6\" height=\"6\">\n"
    "    <rect width=\"6\" height=\"6\" fill=\"#dde4f0\"/>\n"
    "    <path d=\"M0,6 L6,0\" stroke=\"#4c72b0\" stroke-width=\"1.5\"/>\n"
    "  </pattern>\n"
    "</defs>\n";

double nice_ceiling(double x) {
  if (!(x > 0)) return 1.0;
  const double p = std::pow(10.0, std::floor(std::log10(x)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0})
    if (m * p >= x) return m * p;
  return 10 * p;
}

std::string header(const std::string& title) {
  std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
       num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  s += kStyle;
  s += kDefs;
  s += "<text class=\"title\" x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\">" +
       escape(title) + "</text>\n";
  return s;
}

// Horizontal grid lines and y tick labels; returns the pixel scale.
std::string y_axis(double y_max, const std::string& y_title) {
  const double plot_h = kHeight - kTop - kBottom;
  std::string s;
  for (int i = 0; i <= 5; ++i) {
    const double v = y_max * i / 5.0;
    const double y = kTop + plot_h * (1 - i / 5.0);
    s += "<line class=\"grid\" x1=\"" + num(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" +
         num(kWidth - kRight) + "\" y2=\"" + num(y) + "\"/>\n";
    s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" +
         tick_label(v) + "</text>\n";
  }
  s += "<line class=\"axis\" x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) +
       "\" y2=\"" + num(kHeight - kBottom) + "\"/>\n";
  s += "<line class=\"axis\" x1=\"" + num(kLeft) + "\" y1=\"" + num(kHeight - kBottom) + "\" x2=\"" +
       num(kWidth - kRight) + "\" y2=\"" + num(kHeight - kBottom) + "\"/>\n";
  s += "<text x=\"16\" y=\"" + num(kTop + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
       num(kTop + plot_h / 2) + ")\">" + escape(y_title) + "</text>\n";
  return s;
}

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string bar_chart(const std::string& title, std::span<const Bar> bars) {
  double top = 0;
  for (const auto& b : bars) top = std::max(top, b.mean + b.std);
  const double y_max = nice_ceiling(top);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto y_of = [&](double v) { return kTop + plot_h * (1 - std::clamp(v, 0.0, y_max) / y_max); };

  std::string s = header(title) + y_axis(y_max, "regret");
  const double slot = bars.empty() ? plot_w : plot_w / static_cast<double>(bars.size());
  const double width = slot * 0.7;
  for (std::size_t i = 0; i < bars.size(); ++i) {
    const auto& b = bars[i];
    const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
    const double y = y_of(b.mean);
    std::string cls = "bar";
    for (const auto& c : b.classes) cls += " " + c;
    s += "<rect class=\"" + escape(cls) + "\" x=\"" + num(cx - width / 2) + "\" y=\"" + num(y) +
         "\" width=\"" + num(width) + "\" height=\"" + num(kHeight - kBottom - y) + "\"><title>" +
         escape(b.label) + ": " + tick_label(b.mean) + " +/- " + tick_label(b.std) + "</title></rect>\n";
    s += "<line class=\"errbar\" x1=\"" + num(cx) + "\" y1=\"" + num(y_of(b.mean - b.std)) + "\" x2=\"" +
         num(cx) + "\" y2=\"" + num(y_of(b.mean + b.std)) + "\"/>\n";
    s += "<text x=\"" + num(cx) + "\" y=\"" + num(kHeight - kBottom + 14) +
         "\" text-anchor=\"end\" transform=\"rotate(-40 " + num(cx) + " " + num(kHeight - kBottom + 14) +
         ")\">" + escape(b.label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

std::string line_chart(const std::string& title, const std::string& x_title,
                       std::span<const Point> points) {
  double top = 0, x_lo = 0, x_hi = 1;
  if (!points.empty()) {
    x_lo = x_hi = points.front().x;
    for (const auto& p : points) {
      top = std::max(top, p.mean + p.std);
      x_lo = std::min(x_lo, p.x);
      x_hi = std::max(x_hi, p.x);
    }
  }
  if (x_hi == x_lo) x_hi = x_lo + 1;
  const double y_max = nice_ceiling(top);
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double pad = 0.05 * plot_w;
  auto x_of = [&](double x) { return kLeft + pad + (plot_w - 2 * pad) * (x - x_lo) / (x_hi - x_lo); };
  auto y_of = [&](double v) { return kTop + plot_h * (1 - std::clamp(v, 0.0, y_max) / y_max); };

  std::string s = header(title) + y_axis(y_max, "regret");
  std::string path;
  for (const auto& p : points) path += (path.empty() ? "" : " ") + num(x_of(p.x)) + "," + num(y_of(p.mean));
  if (!points.empty()) s += "<polyline class=\"trend\" points=\"" + path + "\"/>\n";
  for (const auto& p : points) {
    const double cx = x_of(p.x);
    s += "<line class=\"errbar\" x1=\"" + num(cx) + "\" y1=\"" + num(y_of(p.mean - p.std)) + "\" x2=\"" +
         num(cx) + "\" y2=\"" + num(y_of(p.mean + p.std)) + "\"/>\n";
    s += "<circle class=\"point\" cx=\"" + num(cx) + "\" cy=\"" + num(y_of(p.mean)) + "\" r=\"4\"><title>" +
         escape(p.x_label) + ": " + tick_label(p.mean) + " +/- " + tick_label(p.std) + "</title></circle>\n";
    s += "<text x=\"" + num(cx) + "\" y=\"" + num(kHeight - kBottom + 16) + "\" text-anchor=\"middle\">" +
         escape(p.x_label) + "</text>\n";
  }
  s += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 30) + "\" text-anchor=\"middle\">" +
       escape(x_title) + "</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace maillard::svg
