#pragma once

#include <ostream>

namespace wpg {

// Axis-aligned box in continuous pixel coordinates. Pixel (x, y) covers
// [x, x+1) x [y, y+1).
struct BoundingBox {
  double lx = 0.0;
  double ly = 0.0;
  double w = 0.0;
  double h = 0.0;

  double cx() const { return lx + 0.5 * w; }
  double cy() const { return ly + 0.5 * h; }
  double area() const { return w * h; }
  bool valid() const { return w > 0.0 && h > 0.0; }

  static BoundingBox centered(double cx, double cy, double w, double h) {
    return {cx - 0.5 * w, cy - 0.5 * h, w, h};
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

std::ostream& operator<<(std::ostream& os, const BoundingBox& b);

// Integer pixel rectangle; may extend past the frame.
struct PixelRect {
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }

  friend bool operator==(const PixelRect&, const PixelRect&) = default;
};

double iou(const BoundingBox& a, const BoundingBox& b);
double intersection_area(const BoundingBox& a, const BoundingBox& b);
double center_distance(const BoundingBox& a, const BoundingBox& b);

// 1 - IoU; the structured loss used by both SVM learners.
inline double overlap_loss(const BoundingBox& a, const BoundingBox& b) { return 1.0 - iou(a, b); }

}  // namespace wpg
