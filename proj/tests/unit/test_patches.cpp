#include <random>

#include <gtest/gtest.h>

#include "wpg/error.hpp"
#include "wpg/patches.hpp"

namespace wpg {
namespace {

Frame random_frame(int w, int h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> u(0, 255);
  Frame f(w, h);
  for (auto& v : f.data()) v = static_cast<std::uint8_t>(u(rng));
  return f;
}

void expect_blocks_normalised(const PatchDescriptor& d) {
  for (int b = 0; b < 3; ++b) EXPECT_NEAR(d.segment<kHistBins>(b * kHistBins).sum(), 1.0, 1e-9);
  const double g = d.tail<kHistBins>().sum();
  EXPECT_TRUE(std::abs(g - 1.0) < 1e-9 || g == 0.0);
  EXPECT_GE(d.minCoeff(), 0.0);
}

TEST(Patches, EvenPartition) {
  const PatchLayout l = partition({0, 0, 80, 80});
  EXPECT_EQ(l.patch_w, 10);
  EXPECT_EQ(l.patch_h, 10);
  EXPECT_EQ(l.nodes[PatchLayout::node_index(0, 0)], (PixelRect{-10, -10, 10, 10}));
  EXPECT_EQ(l.nodes[PatchLayout::node_index(9, 9)], (PixelRect{80, 80, 10, 10}));
  EXPECT_EQ(l.nodes[PatchLayout::node_index(1, 1)], (PixelRect{0, 0, 10, 10}));
}

TEST(Patches, RemainderGoesToLastColumn) {
  const PatchLayout l = partition({0, 0, 83, 80});
  for (int c = 1; c < kGridSide; ++c) EXPECT_EQ(l.nodes[PatchLayout::node_index(1, c)].w, 10);
  EXPECT_EQ(l.nodes[PatchLayout::node_index(1, kGridSide)].w, 13);
}

TEST(Patches, TinyBoxIsGeometryError) {
  try {
    partition({0, 0, 7, 80});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGeometry);
  }
}

TEST(Patches, InteriorTilesBoxExactly) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pos(-20, 20), side(8, 120);
  for (int k = 0; k < 200; ++k) {
    const PatchLayout l = partition({double(pos(rng)), double(pos(rng)), double(side(rng)), double(side(rng))});
    const PixelRect& r = l.raster;
    std::vector<int> cover(static_cast<std::size_t>(r.w) * r.h, 0);
    for (int node : PatchLayout::interior_nodes()) {
      const PixelRect& p = l.nodes[node];
      for (int y = p.y; y < p.y + p.h; ++y)
        for (int x = p.x; x < p.x + p.w; ++x) {
          ASSERT_TRUE(x >= r.x && x < r.x + r.w && y >= r.y && y < r.y + r.h);
          ++cover[static_cast<std::size_t>(y - r.y) * r.w + (x - r.x)];
        }
    }
    for (int c : cover) ASSERT_EQ(c, 1);
  }
}

TEST(Patches, ConstantPatchDescriptor) {
  Frame f(20, 20);
  f.fill_rect({0, 0, 20, 20}, 100, 0, 255);
  const PatchDescriptor d = describe_patch(f, {2, 2, 10, 10});
  EXPECT_DOUBLE_EQ(d[100 >> 5], 1.0);
  EXPECT_DOUBLE_EQ(d[kHistBins + 0], 1.0);
  EXPECT_DOUBLE_EQ(d[2 * kHistBins + 7], 1.0);
  EXPECT_EQ(d.tail<kHistBins>().sum(), 0.0);
}

TEST(Patches, VerticalEdgeFillsHorizontalGradientBin) {
  Frame f(20, 20);
  f.fill_rect({10, 0, 10, 20}, 255, 255, 255);
  const PatchDescriptor d = describe_patch(f, {5, 5, 10, 10});
  EXPECT_NEAR(d[3 * kHistBins + 0], 1.0, 1e-12);
}

TEST(Patches, RandomPatchBlocksSumToOne) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Frame f = random_frame(40, 30, s);
    expect_blocks_normalised(describe_patch(f, {3, 4, 17, 11}));
  }
}

TEST(Patches, OffFramePatchesAreClipped) {
  const Frame f = random_frame(30, 30, 2);
  expect_blocks_normalised(describe_patch(f, {-5, -5, 10, 10}));
  const PatchDescriptor outside = describe_patch(f, {-50, 5, 10, 10});
  for (int b = 0; b < 3; ++b) EXPECT_NEAR(outside.segment<kHistBins>(b * kHistBins).sum(), 1.0, 1e-12);
  EXPECT_EQ(outside.tail<kHistBins>().sum(), 0.0);
}

TEST(Patches, FeatureMatrixShapeAndDeterminism) {
  const Frame f = random_frame(160, 160, 4);
  const PatchFeatures a = feature_matrix(f, {40, 40, 80, 80});
  const PatchFeatures b = feature_matrix(f, {40, 40, 80, 80});
  EXPECT_EQ(a.x.rows(), kDescriptorDim);
  EXPECT_EQ(a.x.cols(), kNodeCount);
  EXPECT_TRUE(a.x.allFinite());
  EXPECT_GE(a.x.minCoeff(), 0.0);
  EXPECT_EQ(a.x, b.x);
}

TEST(Patches, ShiftOnPeriodicTexturePermutesColumns) {
  // Texture with period 10 in x; shifting the box by one patch width moves
  // every column one grid step left.
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> u(0, 255);
  std::vector<std::array<std::uint8_t, 3>> tile(10 * 200);
  for (auto& t : tile) t = {std::uint8_t(u(rng)), std::uint8_t(u(rng)), std::uint8_t(u(rng))};
  Frame f(300, 200);
  for (int y = 0; y < 200; ++y)
    for (int x = 0; x < 300; ++x) {
      const auto& t = tile[static_cast<std::size_t>(y) * 10 + x % 10];
      f.set_pixel(x, y, t[0], t[1], t[2]);
    }
  const FeatureMatrix a = feature_matrix(f, {50, 50, 80, 80}).x;
  const FeatureMatrix b = feature_matrix(f, {60, 50, 80, 80}).x;
  for (int r = 0; r < kRingSide; ++r)
    for (int c = 0; c + 1 < kRingSide; ++c)
      EXPECT_TRUE(b.col(PatchLayout::node_index(r, c)).isApprox(a.col(PatchLayout::node_index(r, c + 1)), 1e-12));
}

TEST(Patches, SeedsOfEvenBox) {
  const SeedAssignment s = init_seeds(partition({0, 0, 80, 80}));
  EXPECT_EQ(s.foreground_count(), 16);
  EXPECT_EQ(s.background_count(), kRingCount);
  EXPECT_EQ(s.undetermined_count(), 48);
  for (int r = 0; r < kRingSide; ++r)
    for (int c = 0; c < kRingSide; ++c) {
      const bool fg = r >= 3 && r <= 6 && c >= 3 && c <= 6;
      EXPECT_EQ(s.r[PatchLayout::node_index(r, c)], fg ? 1.0 : 0.0);
    }
}

TEST(Patches, SeedInvariantsOnRandomBoxes) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pos(-10.0, 50.0), side(8.0, 200.0);
  for (int k = 0; k < 300; ++k) {
    const SeedAssignment s = init_seeds(partition({pos(rng), pos(rng), side(rng), side(rng)}));
    EXPECT_EQ(s.background_count(), kRingCount);
    EXPECT_GE(s.foreground_count(), 1);
    EXPECT_EQ(s.foreground_count() + s.background_count() + s.undetermined_count(), kNodeCount);
    for (int i = 0; i < kNodeCount; ++i) {
      if (s.gamma[i] == 0.0) {
        EXPECT_EQ(s.r[i], 0.0);
      }
    }
  }
}

}  // namespace
}  // namespace wpg
