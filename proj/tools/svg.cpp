#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

namespace dampo::cli {

namespace {

constexpr double kWidth = 640.0, kHeight = 420.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;
const char* const kColors[] = {"#1f4e9c", "#b03a2e", "#2e7d32", "#6a1b9a", "#ef6c00"};

std::string escape(const std::string& s) {
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

// 1, 2 or 5 times a power of ten, giving about n ticks
double tick_step(double span, int n) {
  const double raw = span / n;
  const double p = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 5.0})
    if (raw <= f * p) return f * p;
  return 10.0 * p;
}

std::string tick_label(double v, double step) {
  if (std::abs(v) < 1e-12 * step) v = 0.0;
  const int digits = std::max(0, -static_cast<int>(std::floor(std::log10(step))));
  return fmt::format("{:.{}f}", v, digits);
}

}  // namespace

void write_svg(std::ostream& out, const Plot& plot) {
  double x0 = plot.x.front(), x1 = plot.x.back();
  if (!(x1 > x0)) x1 = x0 + 1.0;
  double y0 = 0.0, y1 = 0.0;
  bool first = true;
  for (const auto& c : plot.curves)
    for (double v : c.y) {
      if (!std::isfinite(v)) continue;
      y0 = first ? v : std::min(y0, v);
      y1 = first ? v : std::max(y1, v);
      first = false;
    }
  if (!(y1 > y0)) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto X = [&](double x) { return kLeft + pw * (x - x0) / (x1 - x0); };
  auto Y = [&](double y) { return kTop + ph * (1.0 - (y - y0) / (y1 - y0)); };

  out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{:.0f}" height="{:.0f}" viewBox="0 0 {:.0f} {:.0f}">)",
                     kWidth, kHeight, kWidth, kHeight)
      << "\n";
  if (!plot.stamp.empty()) {
    out << "<!--\n";
    for (const auto& s : plot.stamp) out << "  " << escape(s) << "\n";
    out << "-->\n";
  }
  out << R"(<rect width="100%" height="100%" fill="white"/>)" << "\n";
  out << fmt::format(R"(<text x="{:.1f}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>)",
                     kLeft + pw / 2, escape(plot.title))
      << "\n";

  out << R"(<g font-family="sans-serif" font-size="11" stroke="#888" stroke-width="0.5">)" << "\n";
  const double xs = tick_step(x1 - x0, 8);
  for (double v = std::ceil(x0 / xs) * xs; v <= x1 + 1e-9 * xs; v += xs) {
    out << fmt::format(R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}"/>)", X(v), kTop, X(v), kTop + ph) << "\n";
    out << fmt::format(R"(<text x="{:.2f}" y="{:.2f}" stroke="none" fill="black" text-anchor="middle">{}</text>)", X(v),
                       kTop + ph + 16, tick_label(v, xs))
        << "\n";
  }
  const double ys = tick_step(y1 - y0, 6);
  for (double v = std::ceil(y0 / ys) * ys; v <= y1 + 1e-9 * ys; v += ys) {
    out << fmt::format(R"(<line x1="{:.2f}" y1="{:.2f}" x2="{:.2f}" y2="{:.2f}"/>)", kLeft, Y(v), kLeft + pw, Y(v)) << "\n";
    out << fmt::format(R"(<text x="{:.2f}" y="{:.2f}" stroke="none" fill="black" text-anchor="end">{}</text>)", kLeft - 6,
                       Y(v) + 4, tick_label(v, ys))
        << "\n";
  }
  out << "</g>\n";
  out << fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="none" stroke="black"/>)", kLeft,
                     kTop, pw, ph)
      << "\n";
  out << fmt::format(R"(<text x="{:.1f}" y="{:.1f}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>)",
                     kLeft + pw / 2, kHeight - 12, escape(plot.x_label))
      << "\n";
  out << fmt::format(
             R"svg(<text x="16" y="{:.1f}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.1f})">{}</text>)svg",
             kTop + ph / 2, kTop + ph / 2, escape(plot.y_label))
      << "\n";

  for (std::size_t k = 0; k < plot.curves.size(); ++k) {
    const auto& c = plot.curves[k];
    const char* color = kColors[k % std::size(kColors)];
    out << fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="1.5"{} points=")", color,
                       c.dashed ? R"( stroke-dasharray="6 4")" : "");
    bool sep = false;
    for (std::size_t i = 0; i < plot.x.size() && i < c.y.size(); ++i) {
      if (!std::isfinite(c.y[i])) continue;
      out << fmt::format("{}{:.2f},{:.2f}", sep ? " " : "", X(plot.x[i]), Y(c.y[i]));
      sep = true;
    }
    out << "\"/>\n";
    const double ly = kTop + 16 + 16 * static_cast<double>(k);
    out << fmt::format(R"(<line x1="{:.1f}" y1="{:.1f}" x2="{:.1f}" y2="{:.1f}" stroke="{}" stroke-width="1.5"{}/>)",
                       kLeft + pw - 150, ly, kLeft + pw - 120, ly, color, c.dashed ? R"( stroke-dasharray="6 4")" : "")
        << "\n";
    out << fmt::format(R"(<text x="{:.1f}" y="{:.1f}" font-family="sans-serif" font-size="12">{}</text>)",
                       kLeft + pw - 114, ly + 4, escape(c.label))
        << "\n";
  }
  out << "</svg>\n";
}

}  // namespace dampo::cli
