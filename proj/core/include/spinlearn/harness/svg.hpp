#pragma once

#include <optional>
#include <string>
#include <vector>

namespace spinlearn::harness {

struct LineSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<LineSeries> series;
  /// Vertical marker, e.g. the end of the training window.
  std::optional<double> marker_x;
  std::string marker_label = "training window";
  bool log_y = false;
};

/// Standalone SVG document. Non-finite points break a line; output depends
/// only on the input values.
std::string render_svg(const LineChart& chart);

}  // namespace spinlearn::harness
