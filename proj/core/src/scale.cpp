#include "wpg/scale.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wpg/error.hpp"

namespace wpg {
namespace {

BoundingBox clamp_to_frame(BoundingBox b, int width, int height, double min_side) {
  const double fw = width, fh = height;
  b.w = std::clamp(b.w, std::min(min_side, fw), fw);
  b.h = std::clamp(b.h, std::min(min_side, fh), fh);
  const double cx = std::clamp(b.cx(), 0.0, fw);
  const double cy = std::clamp(b.cy(), 0.0, fh);
  return BoundingBox::centered(cx, cy, b.w, b.h);
}

// Subgradient of one summand with the ridge split evenly across samples.
Eigen::VectorXd sample_gradient(const Eigen::VectorXd& g, const Eigen::VectorXd& diff, double loss, double ridge) {
  Eigen::VectorXd grad = 2.0 * ridge * g;
  if (loss - g.dot(diff) > 0.0) grad -= diff;
  return grad;
}

}  // namespace

std::vector<BoundingBox> sample_scale_candidates(const BoundingBox& center, int frame_width, int frame_height,
                                                 const ScaleSamplingParams& params, std::mt19937_64& rng) {
  if (!center.valid()) throw Error(ErrorKind::kGeometry, "scale sampling needs a valid box");
  if (params.count < 1) throw Error(ErrorKind::kParameter, "sample count must be positive");
  if (params.scale_std < 0 || params.aspect_std < 0 || params.dx_std < 0 || params.dy_std < 0) {
    throw Error(ErrorKind::kParameter, "sampling deviations must be >= 0");
  }
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<BoundingBox> out;
  out.reserve(params.count);
  out.push_back(center);
  for (int i = 1; i < params.count; ++i) {
    const double s = 1.0 + params.scale_std * unit(rng);
    const double a = std::max(1e-6, 1.0 + params.aspect_std * unit(rng));
    const double dx = params.dx_std * unit(rng);
    const double dy = params.dy_std * unit(rng);
    const double w = std::abs(s) * std::sqrt(a) * center.w;
    const double h = std::abs(s) / std::sqrt(a) * center.h;
    out.push_back(clamp_to_frame(BoundingBox::centered(center.cx() + dx, center.cy() + dy, w, h), frame_width,
                                 frame_height, params.min_side));
  }
  return out;
}

std::vector<BoundingBox> scale_training_boxes(const BoundingBox& box) {
  std::vector<BoundingBox> out;
  for (int k = 0; k <= 50; ++k) {
    if (k == 25) continue;
    const double f = 0.5 + 0.02 * k;
    out.push_back(BoundingBox::centered(box.cx(), box.cy(), f * box.w, f * box.h));
  }
  return out;
}

double scale_objective(const Eigen::VectorXd& g, const Eigen::MatrixXd& x, const Eigen::VectorXd& x_star,
                       const Eigen::VectorXd& loss, double xi) {
  const Eigen::VectorXd margins = ((-x).colwise() + x_star).transpose() * g;
  return (loss - margins).cwiseMax(0.0).sum() + xi * g.squaredNorm();
}

ScaleTrainingResult train_scale_classifier(const Eigen::VectorXd& g0, const Eigen::MatrixXd& x,
                                           const Eigen::VectorXd& x_star, const Eigen::VectorXd& loss,
                                           const ScaleTrainingParams& params, std::mt19937_64& rng) {
  const Eigen::Index n = x.cols();
  if (n < 1 || x.rows() != g0.size() || x_star.size() != g0.size() || loss.size() != n) {
    throw Error(ErrorKind::kInput, "inconsistent scale training data");
  }
  if (params.xi < 0 || params.epochs < 0 || !(params.step > 0)) {
    throw Error(ErrorKind::kParameter, "invalid scale training parameters");
  }
  const Eigen::MatrixXd diff = (-x).colwise() + x_star;  // x_star - x_b
  const double ridge = params.xi / static_cast<double>(n);

  ScaleTrainingResult out;
  out.initial_objective = scale_objective(g0, x, x_star, loss, params.xi);
  out.g = g0;
  out.final_objective = out.initial_objective;

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  Eigen::VectorXd g = g0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    const Eigen::VectorXd snapshot = g;
    std::vector<Eigen::VectorXd> snap_grads(n);
    Eigen::VectorXd mean_grad = Eigen::VectorXd::Zero(g.size());
    for (Eigen::Index b = 0; b < n; ++b) {
      snap_grads[b] = sample_gradient(snapshot, diff.col(b), loss(b), ridge);
      mean_grad += snap_grads[b];
    }
    mean_grad /= static_cast<double>(n);
    std::shuffle(order.begin(), order.end(), rng);
    for (const Eigen::Index b : order) {
      g -= params.step * (sample_gradient(g, diff.col(b), loss(b), ridge) - snap_grads[b] + mean_grad);
    }
    const double obj = scale_objective(g, x, x_star, loss, params.xi);
    if (obj < out.final_objective) {
      out.final_objective = obj;
      out.g = g;
    }
  }
  return out;
}

}  // namespace wpg
