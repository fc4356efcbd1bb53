#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "wpg/descriptor.hpp"
#include "wpg/error.hpp"

namespace wpg {
namespace {

TEST(Descriptor, InteriorWeightsPickInteriorNodes) {
  Eigen::VectorXd node(kNodeCount);
  for (int i = 0; i < kNodeCount; ++i) node[i] = i;
  const InteriorWeights w = interior_weights(node);
  EXPECT_EQ(w[0], PatchLayout::node_index(1, 1));
  EXPECT_EQ(w[kInteriorCount - 1], PatchLayout::node_index(8, 8));
  EXPECT_THROW(interior_weights(Eigen::VectorXd::Ones(5)), Error);
}

TEST(Descriptor, SigmoidWeightsFormula) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  InteriorWeights w;
  for (auto& v : w) v = u(rng);
  const InteriorWeights s = sigmoid_weights(w, 37.0);
  const double sum = w.sum();
  for (int i = 0; i < kInteriorCount; ++i) EXPECT_NEAR(s[i], 1.0 / (1.0 + std::exp(-37.0 * w[i] / sum)), 1e-15);
  EXPECT_GE(s.minCoeff(), 0.5);
  EXPECT_LE(s.maxCoeff(), 1.0);
}

TEST(Descriptor, SigmoidWeightsEdgeCases) {
  const InteriorWeights zero = sigmoid_weights(InteriorWeights::Zero());
  EXPECT_EQ(zero.minCoeff(), zero.maxCoeff());
  InteriorWeights neg = InteriorWeights::Ones();
  neg[3] = -1.0;
  try {
    sigmoid_weights(neg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParameter);
  }
}

TEST(Descriptor, WeightedDescriptorIsUnitNormAndBlockScaled) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  FeatureMatrix x(kDescriptorDim, kInteriorCount);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
  InteriorWeights w;
  for (auto& v : w) v = 0.5 + 0.5 * u(rng);
  const WeightedDescriptor d = weighted_descriptor(x, w);
  ASSERT_EQ(d.size(), kWeightedDim);
  EXPECT_NEAR(d.norm(), 1.0, 1e-12);
  const double k = d[0] / (w[0] * x(0, 0));
  for (int b = 0; b < kInteriorCount; ++b)
    EXPECT_TRUE(d.segment(b * kDescriptorDim, kDescriptorDim).isApprox(k * w[b] * x.col(b), 1e-12));
}

TEST(Descriptor, ZeroDescriptorIsDegenerate) {
  try {
    weighted_descriptor(FeatureMatrix::Zero(kDescriptorDim, kInteriorCount), InteriorWeights::Ones());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerateDescriptor);
  }
}

}  // namespace
}  // namespace wpg
