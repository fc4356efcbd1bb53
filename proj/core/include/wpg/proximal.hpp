#pragma once

#include <Eigen/Core>

namespace wpg {

// Elementwise shrinkage sign(m) * max(|m| - tau, 0); proximal map of tau*||.||_1.
Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& m, double tau);

// Column-wise shrinkage; proximal map of tau*||.||_{2,1} (sum of column norms).
Eigen::MatrixXd shrink_l21(const Eigen::MatrixXd& m, double tau);

double l1_norm(const Eigen::MatrixXd& m);
double l21_norm(const Eigen::MatrixXd& m);

}  // namespace wpg
