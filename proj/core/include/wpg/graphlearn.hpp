#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "wpg/patches.hpp"

namespace wpg {

struct GraphSolverParams {
  double alpha = 0.1;     // l1 weight on the representation Z
  double beta = 0.1;      // l2,1 weight on the residual E
  double gamma = 10.0;    // graph smoothness of the representation
  double lambda1 = 5.0;   // smoothness of node weights over the affinity graph
  double lambda2 = 0.5;   // fit of node weights to the seeds
  double lambda3 = 1.0;   // Frobenius regulariser on A
  double lambda4 = 1.0;   // ridge on node weights
  int neighbors = 6;      // nonzeros allowed per affinity row
  double mu0 = 0.1;
  double mu_max = 1e10;
  double rho = 1.1;
  double tol = 1e-6;
  int max_iter = 100;
  // Use gamma instead of gamma/mu in the Q system.
  bool unscaled_q = false;

  // Throws a parameter error when a field is out of range for n nodes.
  void validate(int n) const;
};

enum class SolverVariant {
  kFull,  // learned affinity, l1 on Z, l2,1 on E
  kNoAffinity,  // weights diffused through the symmetrised |Z|
  kRidgeZ,      // Frobenius penalty on Z, closed-form Z step
  kRidgeE,      // Frobenius penalty on E, closed-form E step
};

std::string_view to_string(SolverVariant v);
SolverVariant parse_solver_variant(std::string_view name);

struct GraphSolverState {
  Eigen::MatrixXd z, q, e, a;
  Eigen::VectorXd w;
  Eigen::MatrixXd y1, y2;
  double mu = 0.0;
  int iter = 0;

  static GraphSolverState initial(Eigen::Index d, Eigen::Index n, double mu0);
};

struct GraphSolution {
  Eigen::MatrixXd z, q, e, a;
  Eigen::VectorXd w;
  bool converged = false;
  int iterations = 0;
  std::vector<double> trace;  // max element change per iteration
  SolverVariant variant = SolverVariant::kFull;
};

Eigen::MatrixXd laplacian(const Eigen::MatrixXd& a);

// Smooth part of the augmented Lagrangian:
// (mu/2)(||X - XZ - E + Y1/mu||^2 + ||Z - Q + Y2/mu||^2).
double coupling_penalty(const GraphSolverState& s, const Eigen::MatrixXd& x);
Eigen::MatrixXd coupling_gradient_z(const GraphSolverState& s, const Eigen::MatrixXd& x);

// Linearised proximal step on Z with step 1/(eta*mu), eta = ||X||_F^2.
Eigen::MatrixXd update_z(const GraphSolverState& s, const Eigen::MatrixXd& x, const GraphSolverParams& p);
// Q = (Z + Y2/mu)(I + (gamma/mu) L_{A+A^T})^-1, the smoothness term on the symmetrised graph.
Eigen::MatrixXd update_q(const GraphSolverState& s, const GraphSolverParams& p);
Eigen::MatrixXd update_e(const GraphSolverState& s, const Eigen::MatrixXd& x, const GraphSolverParams& p);

// Distances driving row i of the affinity update.
Eigen::VectorXd affinity_costs(int i, const Eigen::MatrixXd& q, const Eigen::VectorXd& w, const GraphSolverParams& p);
// Row i of A: minimiser of <u_i, a> + 0.5||a||^2 over the simplex, restricted
// to the `neighbors` smallest entries of u_i (ties to the lower index).
Eigen::VectorXd update_a_row(int i, const Eigen::MatrixXd& q, const Eigen::VectorXd& w, const GraphSolverParams& p);
Eigen::MatrixXd update_a(const Eigen::MatrixXd& q, const Eigen::VectorXd& w, const GraphSolverParams& p);

Eigen::VectorXd update_w(const Eigen::MatrixXd& a, const SeedAssignment& seeds, const GraphSolverParams& p);

// Closed-form steps of the ablation variants.
Eigen::MatrixXd update_z_ridge(const GraphSolverState& s, const Eigen::MatrixXd& x, const GraphSolverParams& p);
Eigen::MatrixXd update_e_ridge(const GraphSolverState& s, const Eigen::MatrixXd& x, const GraphSolverParams& p);
Eigen::MatrixXd representation_affinity(const Eigen::MatrixXd& z);

using IterationObserver = std::function<void(const GraphSolverState&)>;

GraphSolution solve(const Eigen::MatrixXd& x, const SeedAssignment& seeds, const GraphSolverParams& p,
                    const IterationObserver& observer = {});
GraphSolution solve_variant(const Eigen::MatrixXd& x, const SeedAssignment& seeds, const GraphSolverParams& p,
                            SolverVariant variant, const IterationObserver& observer = {});

}  // namespace wpg
