#include "pentawave/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>


namespace pentawave {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

SvgCanvas::SvgCanvas(Window view, double width_px) : view_(view), width_px_(width_px) {
  const double w = view.xmax - view.xmin;
  const double h = view.ymax - view.ymin;
  if (!(w > 0.0) || !(h > 0.0)) {
    // Degenerate views (e.g. radius 0) get a unit box around the point.
    view_ = {view.xmin - 0.5, view.xmax + 0.5, view.ymin - 0.5, view.ymax + 0.5};
  }
  scale_ = width_px_ / (view_.xmax - view_.xmin);
  height_px_ = (view_.ymax - view_.ymin) * scale_;
}

double SvgCanvas::px(double x) const { return (x - view_.xmin) * scale_; }
double SvgCanvas::py(double y) const { return (view_.ymax - y) * scale_; }

void SvgCanvas::line(Point a, Point b, std::string_view stroke, double width) {
  body_ << "<line x1=\"" << num(px(a.x)) << "\" y1=\"" << num(py(a.y)) << "\" x2=\""
        << num(px(b.x)) << "\" y2=\"" << num(py(b.y)) << "\" stroke=\"" << stroke
        << "\" stroke-width=\"" << num(width) << "\"/>\n";
}

void SvgCanvas::circle(Point c, double radius_px, std::string_view fill, std::string_view stroke) {
  body_ << "<circle cx=\"" << num(px(c.x)) << "\" cy=\"" << num(py(c.y)) << "\" r=\""
        << num(radius_px) << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\"/>\n";
}

void SvgCanvas::polygon(const Point* pts, std::size_t n, std::string_view fill,
                        std::string_view stroke) {
  body_ << "<polygon points=\"";
  for (std::size_t i = 0; i < n; ++i) {
    body_ << (i ? " " : "") << num(px(pts[i].x)) << ',' << num(py(pts[i].y));
  }
  body_ << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\"0.5\"/>\n";
}

void SvgCanvas::polyline(const Point* pts, std::size_t n, std::string_view stroke, double width) {
  body_ << "<polyline points=\"";
  for (std::size_t i = 0; i < n; ++i) {
    body_ << (i ? " " : "") << num(px(pts[i].x)) << ',' << num(py(pts[i].y));
  }
  body_ << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << num(width)
        << "\"/>\n";
}

void SvgCanvas::rect(Point lower_left, double w, double h, std::string_view fill) {
  body_ << "<rect x=\"" << num(px(lower_left.x)) << "\" y=\"" << num(py(lower_left.y + h))
        << "\" width=\"" << num(w * scale_) << "\" height=\"" << num(h * scale_) << "\" fill=\""
        << fill << "\"/>\n";
}

void SvgCanvas::text(Point at, std::string_view s, double size_px) {
  body_ << "<text x=\"" << num(px(at.x)) << "\" y=\"" << num(py(at.y)) << "\" font-size=\""
        << num(size_px) << "\" font-family=\"sans-serif\">" << s << "</text>\n";
}

std::string SvgCanvas::str() const {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width_px_) << "\" height=\""
     << num(height_px_) << "\" viewBox=\"0 0 " << num(width_px_) << ' ' << num(height_px_)
     << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << body_.str() << "</svg>\n";
  return os.str();
}

bool SvgCanvas::clip_line(Vec2 n, double offset, Point& a, Point& b) const {
  // Intersect the line with the four view edges and keep the extreme hits.
  std::vector<Point> hits;
  const double eps = 1e-12 * (view_.xmax - view_.xmin);
  if (std::abs(n.y) > 1e-15) {
    for (double x : {view_.xmin, view_.xmax}) {
      const double y = (offset - n.x * x) / n.y;
      if (y >= view_.ymin - eps && y <= view_.ymax + eps) hits.push_back({x, y});
    }
  }
  if (std::abs(n.x) > 1e-15) {
    for (double y : {view_.ymin, view_.ymax}) {
      const double x = (offset - n.y * y) / n.x;
      if (x >= view_.xmin - eps && x <= view_.xmax + eps) hits.push_back({x, y});
    }
  }
  if (hits.size() < 2) return false;
  const Vec2 dir{-n.y, n.x};
  const auto by_dir = [&](Point p, Point q) { return dot(p, dir) < dot(q, dir); };
  a = *std::min_element(hits.begin(), hits.end(), by_dir);
  b = *std::max_element(hits.begin(), hits.end(), by_dir);
  return true;
}

std::string diverging_colour(double t) {
  t = std::clamp(t, -1.0, 1.0);
  int r = 255;
  int g = 255;
  int b = 255;
  if (t >= 0.0) {
    g = b = static_cast<int>(std::lround(255.0 * (1.0 - t)));
  } else {
    r = g = static_cast<int>(std::lround(255.0 * (1.0 + t)));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace pentawave
