#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace compass::experiments {
namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

constexpr double kWidth = 720.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 30.0;
constexpr double kTop = 42.0;
constexpr double kBottom = 52.0;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range pad_range(double lo, double hi) {
  if (!(lo < hi)) {
    double c = std::isfinite(lo) ? lo : 0.0;
    double span = std::max(1.0, std::abs(c));
    return {c - 0.5 * span, c + 0.5 * span};
  }
  double pad = 0.06 * (hi - lo);
  return {lo - pad, hi + pad};
}

void header(std::ostringstream& svg, const std::string& title) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"#ffffff\"/>\n";
  svg << "<text x=\"" << kWidth / 2
      << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\" fill=\"#222\">"
      << escape(title) << "</text>\n";
}

}  // namespace

std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series, bool scatter) {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool any = false;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!any) {
        xmin = xmax = s.x[i];
        ymin = ymax = s.y[i];
        any = true;
      } else {
        xmin = std::min(xmin, s.x[i]);
        xmax = std::max(xmax, s.x[i]);
        ymin = std::min(ymin, s.y[i]);
        ymax = std::max(ymax, s.y[i]);
      }
    }
  }
  Range xr = pad_range(xmin, xmax);
  Range yr = pad_range(ymin, ymax);

  double plot_w = kWidth - kLeft - kRight;
  double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w; };
  auto py = [&](double y) { return kTop + plot_h - (y - yr.lo) / (yr.hi - yr.lo) * plot_h; };

  std::ostringstream svg;
  header(svg, title);

  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h
      << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    double fx = xr.lo + (xr.hi - xr.lo) * t / ticks;
    double fy = yr.lo + (yr.hi - yr.lo) * t / ticks;
    double gx = px(fx);
    double gy = py(fy);
    svg << "<line x1=\"" << gx << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << gx
        << "\" y2=\"" << kTop + plot_h + 5
        << "\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << gx << "\" y=\"" << kTop + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\" fill=\"#333\">"
        << fmt_tick(fx) << "</text>\n";
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << gy << "\" x2=\"" << kLeft
        << "\" y2=\"" << gy << "\" stroke=\"#444\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << gy + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
           "fill=\"#333\">"
        << fmt_tick(fy) << "</text>\n";
  }

  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#222\">"
      << escape(x_label) << "</text>\n";
  svg << "<text x=\"18\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#222\" transform=\"rotate(-90 18 "
      << kTop + plot_h / 2 << ")\">" << escape(y_label) << "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % kPaletteSize];
    std::size_t count = std::min(s.x.size(), s.y.size());
    if (!scatter && count > 1) {
      svg << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.8\" points=\"";
      for (std::size_t i = 0; i < count; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        svg << fmt(px(s.x[i])) << "," << fmt(py(s.y[i])) << " ";
      }
      svg << "\"/>\n";
    }
    for (std::size_t i = 0; i < count; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      svg << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\""
          << fmt(py(s.y[i])) << "\" r=\"2.6\" fill=\"" << color << "\"/>\n";
    }
  }

  double ly = kTop + 12;
  for (std::size_t si = 0; si < series.size() && si < 10; ++si) {
    const char* color = kPalette[si % kPaletteSize];
    svg << "<rect x=\"" << kLeft + plot_w - 150 << "\" y=\"" << ly - 8
        << "\" width=\"12\" height=\"4\" fill=\"" << color << "\"/>\n";
    svg << "<text x=\"" << kLeft + plot_w - 133 << "\" y=\"" << ly - 2
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#222\">"
        << escape(series[si].label) << "</text>\n";
    ly += 15;
  }

  svg << "</svg>\n";
  return svg.str();
}

std::string bar_chart(const std::string& title, const std::string& x_label,
                      const std::vector<std::string>& labels,
                      const std::vector<double>& values,
                      const std::vector<double>& half_widths) {
  std::size_t count = std::min(labels.size(), values.size());
  double vmax = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    double hw = i < half_widths.size() ? half_widths[i] : 0.0;
    if (std::isfinite(values[i])) vmax = std::max(vmax, values[i] + hw);
  }
  if (vmax <= 0.0) vmax = 1.0;
  vmax *= 1.06;

  double left = 170.0;
  double plot_w = kWidth - left - kRight;
  double plot_h = kHeight - kTop - kBottom;
  double slot = count > 0 ? plot_h / static_cast<double>(count) : plot_h;
  double bar_h = std::min(22.0, slot * 0.6);

  std::ostringstream svg;
  header(svg, title);

  svg << "<line x1=\"" << left << "\" y1=\"" << kTop << "\" x2=\"" << left
      << "\" y2=\"" << kTop + plot_h
      << "\" stroke=\"#444\" stroke-width=\"1\"/>\n";

  const int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    double v = vmax * t / ticks;
    double gx = left + v / vmax * plot_w;
    svg << "<line x1=\"" << gx << "\" y1=\"" << kTop << "\" x2=\"" << gx
        << "\" y2=\"" << kTop + plot_h
        << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << gx << "\" y=\"" << kTop + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\" fill=\"#333\">"
        << fmt_tick(v) << "</text>\n";
  }

  for (std::size_t i = 0; i < count; ++i) {
    double cy = kTop + slot * (static_cast<double>(i) + 0.5);
    double w = std::isfinite(values[i]) ? values[i] / vmax * plot_w : 0.0;
    w = std::max(0.0, w);
    const char* color = kPalette[i % kPaletteSize];
    svg << "<rect x=\"" << left << "\" y=\"" << cy - bar_h / 2 << "\" width=\""
        << fmt(w) << "\" height=\"" << bar_h << "\" fill=\"" << color
        << "\" fill-opacity=\"0.85\"/>\n";
    if (i < half_widths.size() && half_widths[i] > 0.0) {
      double lo = left + std::max(0.0, values[i] - half_widths[i]) / vmax * plot_w;
      double hi = left + std::min(vmax, values[i] + half_widths[i]) / vmax * plot_w;
      svg << "<line x1=\"" << fmt(lo) << "\" y1=\"" << cy << "\" x2=\""
          << fmt(hi) << "\" y2=\"" << cy
          << "\" stroke=\"#222\" stroke-width=\"1.4\"/>\n";
    }
    svg << "<text x=\"" << left - 6 << "\" y=\"" << cy + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
           "fill=\"#222\">"
        << escape(labels[i]) << "</text>\n";
  }

  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
         "fill=\"#222\">"
      << escape(x_label) << "</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace compass::experiments
