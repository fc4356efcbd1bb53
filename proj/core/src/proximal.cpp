#include "wpg/proximal.hpp"

#include <cmath>

#include "wpg/error.hpp"

namespace wpg {

Eigen::MatrixXd soft_threshold(const Eigen::MatrixXd& m, double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorKind::kParameter, "soft threshold requires tau >= 0");
  return m.unaryExpr([tau](double v) {
    const double mag = std::abs(v) - tau;
    return mag > 0.0 ? std::copysign(mag, v) : 0.0;
  });
}

Eigen::MatrixXd shrink_l21(const Eigen::MatrixXd& m, double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorKind::kParameter, "l2,1 shrinkage requires tau >= 0");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double norm = m.col(j).norm();
    if (norm > tau) out.col(j) = ((norm - tau) / norm) * m.col(j);
  }
  return out;
}

double l1_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().sum(); }

double l21_norm(const Eigen::MatrixXd& m) { return m.colwise().norm().sum(); }

}  // namespace wpg
