#pragma once

#include <string>
#include <vector>

namespace spin7lab::report {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotOptions {
  bool log_x = false;
  bool log_y = false;
  int width = 800;
  int height = 600;
  std::string x_label;
  std::string y_label;
  std::string title;
};

/// Renders polyline series into a self-contained SVG document. Output bytes
/// are a pure function of the inputs. Non-finite points (and non-positive
/// ones on log axes) break the polyline rather than aborting the plot.
/// Throws std::invalid_argument when nothing is drawable.
std::string render_line_plot(const std::vector<PlotSeries>& series,
                             const PlotOptions& options);

}  // namespace spin7lab::report
