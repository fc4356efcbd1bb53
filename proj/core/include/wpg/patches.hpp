#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "wpg/frames.hpp"
#include "wpg/geometry.hpp"

namespace wpg {

inline constexpr int kGridSide = 8;                      // interior patches per side
inline constexpr int kRingSide = kGridSide + 2;          // with the one-patch ring
inline constexpr int kNodeCount = kRingSide * kRingSide;  // 100
inline constexpr int kInteriorCount = kGridSide * kGridSide;  // 64
inline constexpr int kRingCount = kNodeCount - kInteriorCount;  // 36
inline constexpr int kHistBins = 8;
inline constexpr int kDescriptorDim = 4 * kHistBins;  // R, G, B, gradient orientation

using PatchDescriptor = Eigen::Matrix<double, kDescriptorDim, 1>;
using FeatureMatrix = Eigen::MatrixXd;  // kDescriptorDim x nodes

// 8x8 interior grid tiling the rasterized box plus a one-patch ring around it.
// Nodes are indexed row-major over the 10x10 grid.
struct PatchLayout {
  BoundingBox box;
  PixelRect raster;  // rasterized box
  int patch_w = 0;   // nominal patch width W'
  int patch_h = 0;   // nominal patch height H'
  std::array<PixelRect, kNodeCount> nodes{};

  static constexpr int node_index(int row, int col) { return row * kRingSide + col; }
  static constexpr bool is_interior(int node) {
    const int r = node / kRingSide, c = node % kRingSide;
    return r >= 1 && r <= kGridSide && c >= 1 && c <= kGridSide;
  }
  // Node indices of the interior patches in row-major order.
  static const std::array<int, kInteriorCount>& interior_nodes();
};

PatchLayout partition(const BoundingBox& box);

// Per-pixel quantities shared by every patch of a frame: colour bins and the
// magnitude/orientation bin of the intensity gradient.
class FrameFeatures {
 public:
  explicit FrameFeatures(const Frame& frame);

  int width() const { return width_; }
  int height() const { return height_; }

  PatchDescriptor describe(const PixelRect& rect) const;

 private:
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::array<std::uint8_t, 3>> color_bin_;
  std::vector<std::uint8_t> grad_bin_;
  std::vector<float> grad_mag_;
};

// Colour (3 x 8 bins) and magnitude-weighted unsigned gradient orientation
// (8 bins over [0, pi)) histograms, each L1-normalised. Off-frame parts of the
// rectangle are clipped; a rectangle entirely outside the frame collapses onto
// the nearest border row/column and gets an all-zero gradient block.
PatchDescriptor describe_patch(const Frame& frame, const PixelRect& rect);

struct PatchFeatures {
  FeatureMatrix x;
  PatchLayout layout;
};

PatchFeatures feature_matrix(const Frame& frame, const BoundingBox& box);
PatchFeatures feature_matrix(const FrameFeatures& features, const BoundingBox& box);

// Descriptors of the 64 interior patches only (kDescriptorDim x 64).
FeatureMatrix interior_descriptors(const FrameFeatures& features, const BoundingBox& box);
FeatureMatrix interior_columns(const FeatureMatrix& x);

struct SeedAssignment {
  Eigen::VectorXd r;      // 1 for foreground seeds
  Eigen::VectorXd gamma;  // 1 for determined (seeded) nodes

  int foreground_count() const;
  int background_count() const;
  int undetermined_count() const;
};

// Foreground seeds: interior patches whose centre lies in the shrunk box
// (lx+0.2w, ly+0.2h, 0.6w, 0.6h). Background seeds: the 36 ring patches.
SeedAssignment init_seeds(const PatchLayout& layout);

}  // namespace wpg
