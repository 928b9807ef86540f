#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dextra::plot {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "iteration";
  std::string y_label = "residual";
  bool log_y = true;
  /// Entries at or below this are clipped before taking logs.
  double y_floor = 1e-16;
};

/// Static vector-graphics line chart (SVG). Intended for log-scale residual
/// curves; no interactive features.
void write_line_plot(const std::filesystem::path& file, const PlotSpec& spec,
                     const std::vector<Series>& series);

}  // namespace dextra::plot
