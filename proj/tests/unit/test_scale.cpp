#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wpg/error.hpp"
#include "wpg/scale.hpp"

namespace wpg {
namespace {

TEST(Scale, FirstCandidateIsCentre) {
  std::mt19937_64 rng(1);
  const BoundingBox c{40, 50, 30, 20};
  const auto boxes = sample_scale_candidates(c, 200, 200, {}, rng);
  ASSERT_EQ(boxes.size(), 100u);
  EXPECT_EQ(boxes[0], c);
}

TEST(Scale, CandidatesStayInsideFrame) {
  std::mt19937_64 rng(2);
  ScaleSamplingParams p;
  p.scale_std = 0.5;
  p.dx_std = 20.0;
  const auto boxes = sample_scale_candidates({5, 5, 60, 60}, 80, 70, p, rng);
  for (std::size_t k = 1; k < boxes.size(); ++k) {
    EXPECT_LE(boxes[k].w, 80.0);
    EXPECT_LE(boxes[k].h, 70.0);
    EXPECT_GE(boxes[k].w, p.min_side);
    EXPECT_GE(boxes[k].cx(), 0.0);
    EXPECT_LE(boxes[k].cy(), 70.0);
  }
}

TEST(Scale, SampleStatistics) {
  std::mt19937_64 rng(3);
  ScaleSamplingParams p;
  p.count = 20000;
  const BoundingBox c{500, 500, 40, 40};
  const auto boxes = sample_scale_candidates(c, 2000, 2000, p, rng);
  double mean = 0.0, var = 0.0;
  for (std::size_t k = 1; k < boxes.size(); ++k) mean += std::sqrt(boxes[k].area()) / 40.0;
  mean /= boxes.size() - 1;
  for (std::size_t k = 1; k < boxes.size(); ++k) {
    const double s = std::sqrt(boxes[k].area()) / 40.0;
    var += (s - mean) * (s - mean);
  }
  var /= boxes.size() - 2;
  EXPECT_NEAR(mean, 1.0, 0.005);
  EXPECT_NEAR(std::sqrt(var), p.scale_std, 0.005);
}

TEST(Scale, InvalidSamplingParameters) {
  std::mt19937_64 rng(4);
  ScaleSamplingParams p;
  p.count = 0;
  EXPECT_THROW(sample_scale_candidates({0, 0, 10, 10}, 50, 50, p, rng), Error);
  EXPECT_THROW(sample_scale_candidates({0, 0, 0, 10}, 50, 50, {}, rng), Error);
}

TEST(Scale, TrainingBoxes) {
  const BoundingBox b{10, 10, 40, 20};
  const auto boxes = scale_training_boxes(b);
  ASSERT_EQ(boxes.size(), 50u);
  EXPECT_NEAR(boxes.front().w, 20.0, 1e-12);
  EXPECT_NEAR(boxes.back().w, 60.0, 1e-12);
  for (const auto& x : boxes) {
    EXPECT_NEAR(x.cx(), b.cx(), 1e-12);
    EXPECT_GT(std::abs(x.w - b.w), 1e-9);
  }
}

TEST(Scale, ObjectiveMatchesBruteForce) {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd x = test::random_matrix(6, 9, rng);
  const Eigen::VectorXd xs = test::random_matrix(6, 1, rng);
  const Eigen::VectorXd g = test::random_matrix(6, 1, rng);
  const Eigen::VectorXd loss = test::random_matrix(9, 1, rng).cwiseAbs();
  double ref = 0.01 * g.squaredNorm();
  for (int b = 0; b < 9; ++b) ref += std::max(0.0, loss[b] - g.dot(xs - x.col(b)));
  EXPECT_NEAR(scale_objective(g, x, xs, loss, 0.01), ref, 1e-12);
}

TEST(Scale, TrainingNeverIncreasesObjective) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    std::mt19937_64 rng(s);
    const Eigen::MatrixXd x = test::random_matrix(10, 50, rng);
    const Eigen::VectorXd xs = test::random_matrix(10, 1, rng);
    const Eigen::VectorXd loss = test::random_matrix(50, 1, rng).cwiseAbs();
    const Eigen::VectorXd g0 = Eigen::VectorXd::Zero(10);
    const auto r = train_scale_classifier(g0, x, xs, loss, {}, rng);
    EXPECT_LE(r.final_objective, r.initial_objective);
    EXPECT_NEAR(r.final_objective, scale_objective(r.g, x, xs, loss, 0.01), 1e-12);
  }
}

TEST(Scale, TrainingSeparatesLabelledBox) {
  // x_star sits far along a fixed direction; after training it outscores
  // every rescaled sample.
  std::mt19937_64 rng(7);
  Eigen::MatrixXd x = test::random_matrix(5, 50, rng, 0.1);
  Eigen::VectorXd xs = Eigen::VectorXd::Zero(5);
  xs[0] = 2.0;
  const Eigen::VectorXd loss = Eigen::VectorXd::Constant(50, 0.5);
  ScaleTrainingParams p;
  p.epochs = 10;
  p.step = 0.02;
  const auto r = train_scale_classifier(Eigen::VectorXd::Zero(5), x, xs, loss, p, rng);
  EXPECT_LT(r.final_objective, r.initial_objective);
  for (int b = 0; b < 50; ++b) EXPECT_GT(r.g.dot(xs), r.g.dot(x.col(b)));
}

}  // namespace
}  // namespace wpg
