#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "wpg/geometry.hpp"

namespace wpg {

struct ScaleSamplingParams {
  int count = 100;
  double scale_std = 0.05;
  double aspect_std = 0.01;
  double dx_std = 1.0;
  double dy_std = 1.0;
  double min_side = 8.0;  // smallest box the patch grid can tile
};

// First sample is `center` itself; the rest are drawn as
// s ~ N(1, scale_std), a ~ N(1, aspect_std), w' = s*sqrt(a)*w,
// h' = s/sqrt(a)*h, centre shifted by (N(0, dx_std), N(0, dy_std)), then
// clamped to the frame.
std::vector<BoundingBox> sample_scale_candidates(const BoundingBox& center, int frame_width, int frame_height,
                                                 const ScaleSamplingParams& params, std::mt19937_64& rng);

// Boxes rescaled about the centre of `box` by 0.50, 0.52, ..., 1.50, skipping
// 1.0 (50 boxes).
std::vector<BoundingBox> scale_training_boxes(const BoundingBox& box);

struct ScaleTrainingParams {
  double xi = 0.01;  // ridge weight on g
  int epochs = 2;
  double step = 0.1;
};

// sum_b max(0, loss_b - <g, x_star - x_b>) + xi ||g||^2: the labelled box must
// outscore every rescaled box by its overlap loss.
double scale_objective(const Eigen::VectorXd& g, const Eigen::MatrixXd& x, const Eigen::VectorXd& x_star,
                       const Eigen::VectorXd& loss, double xi);

struct ScaleTrainingResult {
  Eigen::VectorXd g;
  double initial_objective = 0.0;
  double final_objective = 0.0;
};

// SVRG on the objective above: per epoch a full-gradient snapshot, then one
// pass over the samples in shuffled order. The best iterate seen is
// returned, so the objective never increases. x holds one sample per column.
ScaleTrainingResult train_scale_classifier(const Eigen::VectorXd& g0, const Eigen::MatrixXd& x,
                                           const Eigen::VectorXd& x_star, const Eigen::VectorXd& loss,
                                           const ScaleTrainingParams& params, std::mt19937_64& rng);

}  // namespace wpg
