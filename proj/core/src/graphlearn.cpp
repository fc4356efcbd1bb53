#include "wpg/graphlearn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>

#include "wpg/error.hpp"
#include "wpg/proximal.hpp"

namespace wpg {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void GraphSolverParams::validate(int n) const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::kParameter, what);
  };
  require(alpha > 0 && beta > 0 && gamma > 0, "alpha, beta and gamma must be positive");
  require(lambda1 > 0 && lambda2 > 0 && lambda3 > 0 && lambda4 > 0, "lambda1..lambda4 must be positive");
  require(neighbors >= 1 && neighbors <= n, "neighbor count must lie in [1, n]");
  require(rho > 1.0, "rho must exceed 1");
  require(mu0 > 0 && mu0 < mu_max, "penalty schedule needs 0 < mu0 < mu_max");
  require(tol > 0 && max_iter >= 1, "tolerance and iteration cap must be positive");
}

std::string_view to_string(SolverVariant v) {
  switch (v) {
    case SolverVariant::kFull: return "full";
    case SolverVariant::kNoAffinity: return "wpg_a";
    case SolverVariant::kRidgeZ: return "wpg_z";
    case SolverVariant::kRidgeE: return "wpg_e";
  }
  return "full";
}

SolverVariant parse_solver_variant(std::string_view name) {
  if (name == "full") return SolverVariant::kFull;
  if (name == "wpg_a") return SolverVariant::kNoAffinity;
  if (name == "wpg_z") return SolverVariant::kRidgeZ;
  if (name == "wpg_e") return SolverVariant::kRidgeE;
  throw Error(ErrorKind::kParameter, "unknown solver variant '" + std::string(name) + "'");
}

GraphSolverState GraphSolverState::initial(Eigen::Index d, Eigen::Index n, double mu0) {
  GraphSolverState s;
  s.z = MatrixXd::Zero(n, n);
  s.q = MatrixXd::Zero(n, n);
  s.e = MatrixXd::Zero(d, n);
  s.a = MatrixXd::Zero(n, n);
  s.w = VectorXd::Ones(n);
  s.y1 = MatrixXd::Zero(d, n);
  s.y2 = MatrixXd::Zero(n, n);
  s.mu = mu0;
  return s;
}

MatrixXd laplacian(const MatrixXd& a) {
  MatrixXd l = -a;
  l.diagonal() += a.rowwise().sum();
  return l;
}

double coupling_penalty(const GraphSolverState& s, const MatrixXd& x) {
  const MatrixXd r1 = x - x * s.z - s.e + s.y1 / s.mu;
  const MatrixXd r2 = s.z - s.q + s.y2 / s.mu;
  return 0.5 * s.mu * (r1.squaredNorm() + r2.squaredNorm());
}

MatrixXd coupling_gradient_z(const GraphSolverState& s, const MatrixXd& x) {
  const MatrixXd r1 = x - x * s.z - s.e + s.y1 / s.mu;
  const MatrixXd r2 = s.z - s.q + s.y2 / s.mu;
  return -s.mu * (x.transpose() * r1 - r2);
}

MatrixXd update_z(const GraphSolverState& s, const MatrixXd& x, const GraphSolverParams& p) {
  const double eta = x.squaredNorm();
  if (!(eta > 0.0)) throw Error(ErrorKind::kParameter, "feature matrix must be nonzero");
  const MatrixXd grad = coupling_gradient_z(s, x);
  if (!grad.allFinite()) throw NumericalFailure(s.iter, "non-finite gradient in Z step");
  const double step = 1.0 / (eta * s.mu);
  return soft_threshold(s.z - step * grad, p.alpha * step);
}

MatrixXd update_q(const GraphSolverState& s, const GraphSolverParams& p) {
  const Eigen::Index n = s.z.rows();
  const double c = p.unscaled_q ? p.gamma : p.gamma / s.mu;
  // Laplacian of A + A^T is PSD, so the system is SPD.
  const MatrixXd system = MatrixXd::Identity(n, n) + c * laplacian(s.a + s.a.transpose());
  const MatrixXd rhs = s.z + s.y2 / s.mu;
  Eigen::LLT<MatrixXd> llt(system);
  if (llt.info() != Eigen::Success) throw NumericalFailure(s.iter, "Q system is not positive definite");
  MatrixXd q = llt.solve(rhs.transpose()).transpose();
  if (!q.allFinite()) throw NumericalFailure(s.iter, "non-finite Q");
  return q;
}

MatrixXd update_e(const GraphSolverState& s, const MatrixXd& x, const GraphSolverParams& p) {
  return shrink_l21(x - x * s.z + s.y1 / s.mu, p.beta / s.mu);
}

VectorXd affinity_costs(int i, const MatrixXd& q, const VectorXd& w, const GraphSolverParams& p) {
  const Eigen::Index n = q.cols();
  VectorXd u(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double dq = (q.col(i) - q.col(j)).squaredNorm();
    const double dw = w[i] - w[j];
    u[j] = (0.5 * p.gamma * dq + p.lambda1 * dw * dw) / p.lambda3;
  }
  return u;
}

namespace {

VectorXd simplex_row_from_costs(const VectorXd& u, int neighbors) {
  const auto n = static_cast<int>(u.size());
  if (neighbors < 1 || neighbors > n) throw Error(ErrorKind::kParameter, "neighbor count must lie in [1, n]");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + neighbors, order.end(),
                    [&u](int a, int b) { return u[a] < u[b] || (u[a] == u[b] && a < b); });

  // Largest support size k <= neighbors whose threshold stays above the k-th
  // cost; with no clipping this is k = neighbors and the closed form
  // ((1 + sum of the smallest costs) / neighbors - u)_+ results.
  double prefix = 0.0, tau = 0.0;
  for (int k = 1; k <= neighbors; ++k) {
    prefix += u[order[k - 1]];
    const double t = (1.0 + prefix) / k;
    if (t > u[order[k - 1]]) tau = t;
    else break;
  }
  VectorXd row = VectorXd::Zero(n);
  for (int k = 0; k < neighbors; ++k) {
    const int j = order[k];
    row[j] = std::max(tau - u[j], 0.0);
  }
  return row;
}

}  // namespace

VectorXd update_a_row(int i, const MatrixXd& q, const VectorXd& w, const GraphSolverParams& p) {
  return simplex_row_from_costs(affinity_costs(i, q, w, p), p.neighbors);
}

MatrixXd update_a(const MatrixXd& q, const VectorXd& w, const GraphSolverParams& p) {
  const Eigen::Index n = q.cols();
  MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a.row(i) = update_a_row(static_cast<int>(i), q, w, p).transpose();
  return a;
}

VectorXd update_w(const MatrixXd& a, const SeedAssignment& seeds, const GraphSolverParams& p) {
  const Eigen::Index n = a.rows();
  if (seeds.r.size() != n || seeds.gamma.size() != n || a.cols() != n) {
    throw Error(ErrorKind::kInput, "affinity and seed sizes disagree");
  }
  const MatrixXd sym = a + a.transpose();
  MatrixXd system = -2.0 * p.lambda1 * sym;
  system.diagonal() += 2.0 * p.lambda1 * sym.rowwise().sum() + p.lambda2 * seeds.gamma +
                       VectorXd::Constant(n, p.lambda4);
  const VectorXd rhs = p.lambda2 * seeds.gamma.cwiseProduct(seeds.r);
  Eigen::LLT<MatrixXd> llt(system);
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::kNumericalFailure, "weight system is not positive definite");
  return llt.solve(rhs).cwiseMax(0.0);
}

MatrixXd update_z_ridge(const GraphSolverState& s, const MatrixXd& x, const GraphSolverParams& p) {
  MatrixXd system = x.transpose() * x;
  system.diagonal().array() += (p.alpha + s.mu) / s.mu;
  const MatrixXd rhs = x.transpose() * (x - s.e + s.y1 / s.mu) + s.q - s.y2 / s.mu;
  Eigen::LLT<MatrixXd> llt(system);
  if (llt.info() != Eigen::Success) throw NumericalFailure(s.iter, "ridge Z system is not positive definite");
  return llt.solve(rhs);
}

MatrixXd update_e_ridge(const GraphSolverState& s, const MatrixXd& x, const GraphSolverParams& p) {
  return (s.mu / (s.mu + p.beta)) * (x - x * s.z + s.y1 / s.mu);
}

MatrixXd representation_affinity(const MatrixXd& z) {
  const MatrixXd abs = z.cwiseAbs();
  return 0.5 * (abs + abs.transpose());
}

namespace {

double max_change(const MatrixXd& a, const MatrixXd& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

bool all_finite(const GraphSolverState& s) {
  return s.z.allFinite() && s.q.allFinite() && s.e.allFinite() && s.a.allFinite() && s.w.allFinite() &&
         s.y1.allFinite() && s.y2.allFinite();
}

}  // namespace

GraphSolution solve_variant(const MatrixXd& x, const SeedAssignment& seeds, const GraphSolverParams& p,
                            SolverVariant variant, const IterationObserver& observer) {
  const Eigen::Index d = x.rows(), n = x.cols();
  if (d < 1 || n < 2) throw Error(ErrorKind::kInput, "feature matrix needs d >= 1 and n >= 2");
  if (!x.allFinite()) throw Error(ErrorKind::kInput, "feature matrix contains non-finite values");
  if (seeds.r.size() != n || seeds.gamma.size() != n) throw Error(ErrorKind::kInput, "seed vectors must have n entries");
  p.validate(static_cast<int>(n));

  GraphSolverState s = GraphSolverState::initial(d, n, p.mu0);
  GraphSolution out;
  out.variant = variant;

  while (s.iter < p.max_iter) {
    const GraphSolverState prev = s;

    s.z = variant == SolverVariant::kRidgeZ ? update_z_ridge(s, x, p) : update_z(s, x, p);
    if (variant == SolverVariant::kNoAffinity) {
      s.q = s.z + s.y2 / s.mu;
    } else {
      s.q = update_q(s, p);
    }
    s.e = variant == SolverVariant::kRidgeE ? update_e_ridge(s, x, p) : update_e(s, x, p);
    s.a = variant == SolverVariant::kNoAffinity ? representation_affinity(s.z) : update_a(s.q, s.w, p);
    s.w = update_w(s.a, seeds, p);

    s.y1 += s.mu * (x - x * s.z - s.e);
    s.y2 += s.mu * (s.z - s.q);
    s.mu = std::min(p.mu_max, p.rho * s.mu);
    ++s.iter;

    if (!all_finite(s)) throw NumericalFailure(s.iter, "non-finite iterate");

    const double change = std::max({max_change(s.z, prev.z), max_change(s.q, prev.q), max_change(s.e, prev.e),
                                    max_change(s.a, prev.a), max_change(s.w, prev.w)});
    out.trace.push_back(change);
    if (observer) observer(s);
    if (change < p.tol) {
      out.converged = true;
      break;
    }
  }

  out.z = std::move(s.z);
  out.q = std::move(s.q);
  out.e = std::move(s.e);
  out.a = std::move(s.a);
  out.w = std::move(s.w);
  out.iterations = s.iter;
  return out;
}

GraphSolution solve(const MatrixXd& x, const SeedAssignment& seeds, const GraphSolverParams& p,
                    const IterationObserver& observer) {
  return solve_variant(x, seeds, p, SolverVariant::kFull, observer);
}

}  // namespace wpg
