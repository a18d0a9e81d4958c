#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace slip::lab {

struct Series {
  std::string label;
  std::vector<double> x, y;
  std::string color = "#1f77b4";
  bool dashed = false;
  bool markers = false;
};

struct Marker {
  double x = 0.0;
  std::string label;
};

struct Segment {
  double x0, y0, x1, y1;
  std::string color = "#d62728";
};

/// One plot area with its own axes.
struct Panel {
  std::string title;
  std::string x_label, y_label;
  std::vector<Series> series;
  std::vector<Marker> markers;   // vertical lines across the panel
  std::vector<Segment> segments; // drawn in data coordinates
  bool equal_aspect = false;
};

/// Panels stacked vertically in a single SVG document.
void write_svg(std::ostream& out, const std::vector<Panel>& panels, double width = 720.0,
               double panel_height = 200.0);

}  // namespace slip::lab
