#include "wpg/patches.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wpg/error.hpp"

namespace wpg {

const std::array<int, kInteriorCount>& PatchLayout::interior_nodes() {
  static const std::array<int, kInteriorCount> nodes = [] {
    std::array<int, kInteriorCount> out{};
    int k = 0;
    for (int r = 1; r <= kGridSide; ++r)
      for (int c = 1; c <= kGridSide; ++c) out[k++] = node_index(r, c);
    return out;
  }();
  return nodes;
}

PatchLayout partition(const BoundingBox& box) {
  PatchLayout layout;
  layout.box = box;
  layout.raster = {static_cast<int>(std::lround(box.lx)), static_cast<int>(std::lround(box.ly)),
                   static_cast<int>(std::lround(box.w)), static_cast<int>(std::lround(box.h))};
  const PixelRect& r = layout.raster;
  if (r.w < kGridSide || r.h < kGridSide) {
    throw Error(ErrorKind::kGeometry, "box smaller than 8x8 pixels cannot be partitioned");
  }
  layout.patch_w = r.w / kGridSide;
  layout.patch_h = r.h / kGridSide;

  // Column/row extents for grid index -1..8; the last interior patch absorbs
  // the remainder pixels.
  auto span = [](int origin, int extent, int nominal, int k, int& start, int& len) {
    if (k < 0) {
      start = origin - nominal;
      len = nominal;
    } else if (k >= kGridSide) {
      start = origin + extent;
      len = nominal;
    } else {
      start = origin + k * nominal;
      len = (k == kGridSide - 1) ? extent - (kGridSide - 1) * nominal : nominal;
    }
  };
  for (int gr = 0; gr < kRingSide; ++gr) {
    for (int gc = 0; gc < kRingSide; ++gc) {
      PixelRect& node = layout.nodes[PatchLayout::node_index(gr, gc)];
      span(r.x, r.w, layout.patch_w, gc - 1, node.x, node.w);
      span(r.y, r.h, layout.patch_h, gr - 1, node.y, node.h);
    }
  }
  return layout;
}

FrameFeatures::FrameFeatures(const Frame& frame) : width_(frame.width()), height_(frame.height()) {
  const std::size_t n = static_cast<std::size_t>(width_) * height_;
  color_bin_.resize(n);
  grad_bin_.resize(n);
  grad_mag_.resize(n);

  std::vector<double> intensity(n);
  for (int y = 0; y < height_; ++y) {
    for (int x = 0; x < width_; ++x) {
      const auto i = idx(x, y);
      const int r = frame.at(x, y, 0), g = frame.at(x, y, 1), b = frame.at(x, y, 2);
      color_bin_[i] = {static_cast<std::uint8_t>(r >> 5), static_cast<std::uint8_t>(g >> 5),
                       static_cast<std::uint8_t>(b >> 5)};
      intensity[i] = (r + g + b) / 3.0;
    }
  }
  constexpr double kBinWidth = std::numbers::pi / kHistBins;
  for (int y = 0; y < height_; ++y) {
    const int ym = std::max(y - 1, 0), yp = std::min(y + 1, height_ - 1);
    for (int x = 0; x < width_; ++x) {
      const int xm = std::max(x - 1, 0), xp = std::min(x + 1, width_ - 1);
      const double gx = 0.5 * (intensity[idx(xp, y)] - intensity[idx(xm, y)]);
      const double gy = 0.5 * (intensity[idx(x, yp)] - intensity[idx(x, ym)]);
      const auto i = idx(x, y);
      grad_mag_[i] = static_cast<float>(std::hypot(gx, gy));
      double theta = std::atan2(gy, gx);
      if (theta < 0.0) theta += std::numbers::pi;
      if (theta >= std::numbers::pi) theta -= std::numbers::pi;
      grad_bin_[i] = static_cast<std::uint8_t>(std::min(kHistBins - 1, static_cast<int>(theta / kBinWidth)));
    }
  }
}

PatchDescriptor FrameFeatures::describe(const PixelRect& rect) const {
  int x0 = std::max(rect.x, 0), x1 = std::min(rect.x + rect.w, width_);
  int y0 = std::max(rect.y, 0), y1 = std::min(rect.y + rect.h, height_);
  bool fully_outside = false;
  if (x1 <= x0) {
    fully_outside = true;
    x0 = rect.x + rect.w <= 0 ? 0 : width_ - 1;
    x1 = x0 + 1;
  }
  if (y1 <= y0) {
    fully_outside = true;
    y0 = rect.y + rect.h <= 0 ? 0 : height_ - 1;
    y1 = y0 + 1;
  }

  PatchDescriptor d = PatchDescriptor::Zero();
  double grad_total = 0.0;
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const auto i = idx(x, y);
      const auto& cb = color_bin_[i];
      d[cb[0]] += 1.0;
      d[kHistBins + cb[1]] += 1.0;
      d[2 * kHistBins + cb[2]] += 1.0;
      if (!fully_outside) {
        d[3 * kHistBins + grad_bin_[i]] += grad_mag_[i];
        grad_total += grad_mag_[i];
      }
    }
  }
  const double count = static_cast<double>(x1 - x0) * (y1 - y0);
  d.head<3 * kHistBins>() /= count;
  if (grad_total > 0.0) d.tail<kHistBins>() /= grad_total;
  return d;
}

PatchDescriptor describe_patch(const Frame& frame, const PixelRect& rect) {
  return FrameFeatures(frame).describe(rect);
}

PatchFeatures feature_matrix(const FrameFeatures& features, const BoundingBox& box) {
  PatchFeatures out{FeatureMatrix(kDescriptorDim, kNodeCount), partition(box)};
  for (int i = 0; i < kNodeCount; ++i) out.x.col(i) = features.describe(out.layout.nodes[i]);
  return out;
}

PatchFeatures feature_matrix(const Frame& frame, const BoundingBox& box) {
  return feature_matrix(FrameFeatures(frame), box);
}

FeatureMatrix interior_descriptors(const FrameFeatures& features, const BoundingBox& box) {
  const PatchLayout layout = partition(box);
  FeatureMatrix x(kDescriptorDim, kInteriorCount);
  const auto& interior = PatchLayout::interior_nodes();
  for (int k = 0; k < kInteriorCount; ++k) x.col(k) = features.describe(layout.nodes[interior[k]]);
  return x;
}

FeatureMatrix interior_columns(const FeatureMatrix& x) {
  FeatureMatrix out(x.rows(), kInteriorCount);
  const auto& interior = PatchLayout::interior_nodes();
  for (int k = 0; k < kInteriorCount; ++k) out.col(k) = x.col(interior[k]);
  return out;
}

int SeedAssignment::foreground_count() const {
  int c = 0;
  for (Eigen::Index i = 0; i < r.size(); ++i) c += (gamma[i] == 1.0 && r[i] == 1.0);
  return c;
}

int SeedAssignment::background_count() const {
  int c = 0;
  for (Eigen::Index i = 0; i < r.size(); ++i) c += (gamma[i] == 1.0 && r[i] == 0.0);
  return c;
}

int SeedAssignment::undetermined_count() const {
  int c = 0;
  for (Eigen::Index i = 0; i < gamma.size(); ++i) c += (gamma[i] == 0.0);
  return c;
}

SeedAssignment init_seeds(const PatchLayout& layout) {
  SeedAssignment seeds{Eigen::VectorXd::Zero(kNodeCount), Eigen::VectorXd::Zero(kNodeCount)};
  const BoundingBox& b = layout.box;
  const double sx0 = b.lx + 0.2 * b.w, sx1 = sx0 + 0.6 * b.w;
  const double sy0 = b.ly + 0.2 * b.h, sy1 = sy0 + 0.6 * b.h;

  bool any_foreground = false;
  for (int i = 0; i < kNodeCount; ++i) {
    if (!PatchLayout::is_interior(i)) {
      seeds.gamma[i] = 1.0;
      continue;
    }
    const PixelRect& p = layout.nodes[i];
    if (p.cx() >= sx0 && p.cx() <= sx1 && p.cy() >= sy0 && p.cy() <= sy1) {
      seeds.r[i] = 1.0;
      seeds.gamma[i] = 1.0;
      any_foreground = true;
    }
  }
  if (!any_foreground) {
    // Rasterization can push every centre out of a tiny shrunk region; seed
    // the interior patch nearest the box centre instead.
    int best = PatchLayout::interior_nodes().front();
    double best_d = 1e300;
    for (int i : PatchLayout::interior_nodes()) {
      const double d = std::hypot(layout.nodes[i].cx() - b.cx(), layout.nodes[i].cy() - b.cy());
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    seeds.r[best] = 1.0;
    seeds.gamma[best] = 1.0;
  }
  return seeds;
}

}  // namespace wpg
