#include "spin7lab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "spin7lab/csv.hpp"

namespace spin7lab::report {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  [[nodiscard]] bool valid() const { return lo <= hi; }
};

bool usable(double v, bool log_axis) {
  return std::isfinite(v) && (!log_axis || v > 0.0);
}

double to_axis(double v, bool log_axis) { return log_axis ? std::log10(v) : v; }

// Tick positions: decades on log axes, 1/2/5 ladder on linear ones.
std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  if (!(span > 0.0)) return {lo};
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) {
      step = m * mag;
      break;
    }
  }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + 0.5 * step; v += step) {
    ticks.push_back(v);
  }
  return ticks;
}

std::vector<double> log_ticks(double lo, double hi) {
  std::vector<double> ticks;
  for (double e = std::ceil(lo); e <= std::floor(hi) + 1e-9; e += 1.0) {
    ticks.push_back(e);
  }
  if (ticks.empty()) ticks = {lo, hi};
  return ticks;
}

std::string tick_label(double axis_value, bool log_axis) {
  if (log_axis) return "1e" + format_double(axis_value);
  // Collapse -0 so labels are stable.
  if (axis_value == 0.0) return "0";
  return format_double(axis_value);
}

std::string escape_xml(const std::string& s) {
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

}  // namespace

std::string render_line_plot(const std::vector<PlotSeries>& series,
                             const PlotOptions& options) {
  Range xr, yr;
  std::size_t drawable = 0;
  for (const auto& s : series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (usable(s.x[i], options.log_x) && usable(s.y[i], options.log_y)) {
        xr.include(to_axis(s.x[i], options.log_x));
        yr.include(to_axis(s.y[i], options.log_y));
        ++drawable;
      }
    }
  }
  if (!xr.valid() || !yr.valid() || drawable == 0) {
    throw std::invalid_argument("render_line_plot: no drawable points");
  }
  if (xr.hi == xr.lo) {
    xr.lo -= 0.5;
    xr.hi += 0.5;
  }
  if (yr.hi == yr.lo) {
    yr.lo -= 0.5;
    yr.hi += 0.5;
  }

  const double ml = 70.0, mr = 20.0, mt = options.title.empty() ? 20.0 : 40.0, mb = 55.0;
  const double pw = options.width - ml - mr;
  const double ph = options.height - mt - mb;
  auto px = [&](double ax) { return ml + (ax - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double ay) { return mt + (yr.hi - ay) / (yr.hi - yr.lo) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(options.width) + "\" height=\"" + std::to_string(options.height) +
         "\" viewBox=\"0 0 " + std::to_string(options.width) + " " +
         std::to_string(options.height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  const auto xticks = options.log_x ? log_ticks(xr.lo, xr.hi) : linear_ticks(xr.lo, xr.hi);
  const auto yticks = options.log_y ? log_ticks(yr.lo, yr.hi) : linear_ticks(yr.lo, yr.hi);
  svg += "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double t : xticks) {
    const std::string x = format_double(px(t));
    svg += "<line x1=\"" + x + "\" y1=\"" + format_double(mt) + "\" x2=\"" + x +
           "\" y2=\"" + format_double(mt + ph) + "\"/>\n";
  }
  for (double t : yticks) {
    const std::string y = format_double(py(t));
    svg += "<line x1=\"" + format_double(ml) + "\" y1=\"" + y + "\" x2=\"" +
           format_double(ml + pw) + "\" y2=\"" + y + "\"/>\n";
  }
  svg += "</g>\n";

  svg += "<rect x=\"" + format_double(ml) + "\" y=\"" + format_double(mt) + "\" width=\"" +
         format_double(pw) + "\" height=\"" + format_double(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  svg += "<g font-family=\"monospace\" font-size=\"11\" fill=\"black\">\n";
  for (double t : xticks) {
    svg += "<text x=\"" + format_double(px(t)) + "\" y=\"" + format_double(mt + ph + 16.0) +
           "\" text-anchor=\"middle\">" + tick_label(t, options.log_x) + "</text>\n";
  }
  for (double t : yticks) {
    svg += "<text x=\"" + format_double(ml - 6.0) + "\" y=\"" + format_double(py(t) + 4.0) +
           "\" text-anchor=\"end\">" + tick_label(t, options.log_y) + "</text>\n";
  }
  if (!options.x_label.empty()) {
    svg += "<text x=\"" + format_double(ml + pw / 2.0) + "\" y=\"" +
           format_double(mt + ph + 40.0) + "\" text-anchor=\"middle\">" +
           escape_xml(options.x_label) + "</text>\n";
  }
  if (!options.y_label.empty()) {
    svg += "<text x=\"14\" y=\"" + format_double(mt + ph / 2.0) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " +
           format_double(mt + ph / 2.0) + ")\">" + escape_xml(options.y_label) +
           "</text>\n";
  }
  if (!options.title.empty()) {
    svg += "<text x=\"" + format_double(ml + pw / 2.0) +
           "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
           escape_xml(options.title) + "</text>\n";
  }
  svg += "</g>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const std::size_t n = std::min(s.x.size(), s.y.size());
    std::string points;
    auto flush = [&]() {
      if (!points.empty()) {
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
        points.clear();
      }
    };
    for (std::size_t i = 0; i < n; ++i) {
      if (!usable(s.x[i], options.log_x) || !usable(s.y[i], options.log_y)) {
        flush();
        continue;
      }
      if (!points.empty()) points += ' ';
      points += format_double(px(to_axis(s.x[i], options.log_x)));
      points += ',';
      points += format_double(py(to_axis(s.y[i], options.log_y)));
    }
    flush();
  }

  // Legend, top-right inside the plot frame.
  double ly = mt + 14.0;
  for (std::size_t si = 0; si < series.size(); ++si) {
    if (series[si].label.empty()) continue;
    const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg += "<line x1=\"" + format_double(ml + pw - 120.0) + "\" y1=\"" + format_double(ly - 4.0) +
           "\" x2=\"" + format_double(ml + pw - 100.0) + "\" y2=\"" + format_double(ly - 4.0) +
           "\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    svg += "<text font-family=\"monospace\" font-size=\"11\" x=\"" +
           format_double(ml + pw - 95.0) + "\" y=\"" + format_double(ly) + "\">" +
           escape_xml(series[si].label) + "</text>\n";
    ly += 15.0;
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace spin7lab::report
