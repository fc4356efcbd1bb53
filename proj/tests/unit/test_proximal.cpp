#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wpg/proximal.hpp"

namespace wpg {
namespace {

using Eigen::MatrixXd;

TEST(Proximal, SoftThresholdExamples) {
  MatrixXd m(1, 4);
  m << 3.0, -0.5, 0.2, -2.0;
  MatrixXd expect(1, 4);
  expect << 2.0, 0.0, 0.0, -1.0;
  EXPECT_TRUE(soft_threshold(m, 1.0).isApprox(expect));
}

TEST(Proximal, SoftThresholdMatchesScalarOracle) {
  std::mt19937_64 rng(1);
  const MatrixXd m = test::random_matrix(5, 6, rng, 2.0);
  const double tau = 0.7;
  const MatrixXd s = soft_threshold(m, tau);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double v = m.data()[i];
    const double ref = test::golden_section([&](double z) { return 0.5 * (z - v) * (z - v) + tau * std::abs(z); },
                                            -10.0, 10.0);
    EXPECT_NEAR(s.data()[i], ref, 1e-7);
  }
}

TEST(Proximal, ShrinkL21ScalesColumns) {
  MatrixXd m(2, 2);
  m << 3.0, 0.3, 4.0, 0.4;
  const MatrixXd s = shrink_l21(m, 1.0);
  EXPECT_NEAR(s.col(0).norm(), 4.0, 1e-12);
  EXPECT_TRUE(s.col(0).normalized().isApprox(m.col(0).normalized()));
  EXPECT_EQ(s.col(1).norm(), 0.0);
}

TEST(Proximal, ShrinkL21MinimisesPerColumnObjective) {
  // Along the column direction the objective is 1-D; golden section finds the
  // optimal radius.
  std::mt19937_64 rng(2);
  for (int k = 0; k < 50; ++k) {
    const MatrixXd m = test::random_matrix(8, 12, rng);
    const double tau = 0.5 + 0.1 * (k % 10);
    const MatrixXd s = shrink_l21(m, tau);
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double norm = m.col(j).norm();
      const double t = test::golden_section(
          [&](double rad) { return 0.5 * (rad - norm) * (rad - norm) + tau * std::abs(rad); }, 0.0, norm + 1.0);
      EXPECT_NEAR(s.col(j).norm(), t, 1e-7);
    }
  }
}

TEST(Proximal, Norms) {
  MatrixXd m(2, 2);
  m << 3.0, -1.0, 4.0, 0.0;
  EXPECT_DOUBLE_EQ(l1_norm(m), 8.0);
  EXPECT_DOUBLE_EQ(l21_norm(m), 6.0);
}

}  // namespace
}  // namespace wpg
