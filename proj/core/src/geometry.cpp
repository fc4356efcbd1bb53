#include "wpg/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace wpg {

std::ostream& operator<<(std::ostream& os, const BoundingBox& b) {
  return os << "(" << b.lx << ", " << b.ly << ", " << b.w << ", " << b.h << ")";
}

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const double x0 = std::max(a.lx, b.lx);
  const double y0 = std::max(a.ly, b.ly);
  const double x1 = std::min(a.lx + a.w, b.lx + b.w);
  const double y1 = std::min(a.ly + a.h, b.ly + b.h);
  if (x1 <= x0 || y1 <= y0) return 0.0;
  return (x1 - x0) * (y1 - y0);
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

double center_distance(const BoundingBox& a, const BoundingBox& b) {
  return std::hypot(a.cx() - b.cx(), a.cy() - b.cy());
}

}  // namespace wpg
