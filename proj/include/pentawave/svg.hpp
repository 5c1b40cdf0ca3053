#pragma once

#include <sstream>
#include <string>
#include <string_view>

#include "pentawave/geometry.hpp"

namespace pentawave {

/// Minimal SVG writer. Field coordinates inside `view` map to pixels as
///   px = (x - view.xmin) * s,  py = (view.ymax - y) * s,
///   s  = width_px / (view.xmax - view.xmin),
/// so +y points up in the drawing.
class SvgCanvas {
 public:
  SvgCanvas(Window view, double width_px = 800.0);

  void line(Point a, Point b, std::string_view stroke, double width = 1.0);
  void circle(Point c, double radius_px, std::string_view fill, std::string_view stroke = "none");
  void polygon(const Point* pts, std::size_t n, std::string_view fill, std::string_view stroke);
  void rect(Point lower_left, double w, double h, std::string_view fill);
  void text(Point at, std::string_view s, double size_px = 12.0);
  void polyline(const Point* pts, std::size_t n, std::string_view stroke, double width = 1.0);

  std::string str() const;

  /// Clips the infinite line {p : p . n = offset} to the view; false when it misses.
  bool clip_line(Vec2 n, double offset, Point& a, Point& b) const;

  double scale() const { return scale_; }

 private:
  double px(double x) const;
  double py(double y) const;

  Window view_;
  double scale_;
  double width_px_;
  double height_px_;
  std::ostringstream body_;
};

/// Diverging blue-white-red colour for t in [-1, 1].
std::string diverging_colour(double t);

}  // namespace pentawave
