#include "dextra/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace dextra::plot {

namespace {

constexpr double kWidth = 760, kHeight = 480;
constexpr double kLeft = 70, kRight = 180, kTop = 40, kBottom = 50;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                         "#9467bd", "#8c564b", "#17becf", "#7f7f7f",
                         "#bcbd22", "#e377c2"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_line_plot(const std::filesystem::path& file, const PlotSpec& spec,
                     const std::vector<Series>& series) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot write " + file.string());

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  auto yval = [&](double y) {
    return spec.log_y ? std::log10(std::max(y, spec.y_floor)) : y;
  };
  for (const auto& s : series) {
    for (double x : s.x) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
    }
    for (double y : s.y) {
      y_min = std::min(y_min, yval(y));
      y_max = std::max(y_max, yval(y));
    }
  }
  if (!(x_min < x_max)) x_max = x_min + 1;
  if (!(y_min < y_max)) y_max = y_min + 1;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + (y_max - yval(y)) / (y_max - y_min) * plot_h; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"15\">"
      << spec.title << "</text>\n";

  // Frame and grid.
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
      << "\" height=\"" << plot_h << "\" fill=\"none\" stroke=\"black\"/>\n";

  if (spec.log_y) {
    const int lo = static_cast<int>(std::ceil(y_min));
    const int hi = static_cast<int>(std::floor(y_max));
    const int stride = std::max(1, (hi - lo) / 8);
    for (int e = lo; e <= hi; e += stride) {
      const double yy = kTop + (y_max - e) / (y_max - y_min) * plot_h;
      out << "<line x1=\"" << kLeft << "\" y1=\"" << yy << "\" x2=\""
          << kLeft + plot_w << "\" y2=\"" << yy
          << "\" stroke=\"#dddddd\"/>\n";
      out << "<text x=\"" << kLeft - 6 << "\" y=\"" << yy + 4
          << "\" text-anchor=\"end\">1e" << e << "</text>\n";
    }
  } else {
    for (int t = 0; t <= 5; ++t) {
      const double v = y_min + (y_max - y_min) * t / 5.0;
      const double yy = kTop + (y_max - v) / (y_max - y_min) * plot_h;
      out << "<line x1=\"" << kLeft << "\" y1=\"" << yy << "\" x2=\""
          << kLeft + plot_w << "\" y2=\"" << yy
          << "\" stroke=\"#dddddd\"/>\n";
      out << "<text x=\"" << kLeft - 6 << "\" y=\"" << yy + 4
          << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
    }
  }
  for (int t = 0; t <= 5; ++t) {
    const double v = x_min + (x_max - x_min) * t / 5.0;
    const double xx = px(v);
    out << "<text x=\"" << xx << "\" y=\"" << kTop + plot_h + 18
        << "\" text-anchor=\"middle\">" << fmt(v) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\">" << spec.x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << kTop + plot_h / 2
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kTop + plot_h / 2 << ")\">" << spec.y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % (sizeof(kColors) / sizeof(kColors[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[s].x.size(); ++i)
      out << fmt(px(series[s].x[i])) << "," << fmt(py(series[s].y[i])) << " ";
    out << "\"/>\n";
    const double ly = kTop + 16 + 18 * static_cast<double>(s);
    out << "<line x1=\"" << kLeft + plot_w + 10 << "\" y1=\"" << ly
        << "\" x2=\"" << kLeft + plot_w + 34 << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + plot_w + 40 << "\" y=\"" << ly + 4 << "\">"
        << series[s].label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace dextra::plot
