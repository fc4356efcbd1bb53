#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "wpg/geometry.hpp"

namespace wpg {

struct StructuredSvmParams {
  double c = 100.0;  // box constraint on the positive coefficient
  int budget = 100;  // maximum number of support vectors, 0 for none
  int reprocess_steps = 10;
  int optimize_steps = 10;
  std::uint64_t seed = 0;
};

// One training frame: descriptors of the labelled box (index `label`) and of
// the structured constraint boxes, with their losses relative to the label.
struct SupportPattern {
  Eigen::MatrixXd x;          // descriptor per column
  std::vector<double> loss;   // Delta(box_k, box_label)
  int label = 0;
};

// Online structured SVM with a linear kernel, optimised with the LaRank
// scheme: a new pattern is processed, then old patterns are reprocessed and
// optimised with SMO steps. The weight vector is kept explicitly.
class StructuredSvm {
 public:
  StructuredSvm() = default;
  StructuredSvm(int dim, const StructuredSvmParams& params);

  int dim() const { return static_cast<int>(h_.size()); }
  const StructuredSvmParams& params() const { return params_; }

  double score(const Eigen::VectorXd& x) const { return h_.dot(x); }
  const Eigen::VectorXd& weights() const { return h_; }

  void update(SupportPattern pattern);

  struct SupportVectorView {
    Eigen::VectorXd x;
    double beta;
  };
  std::vector<SupportVectorView> support_vectors() const;
  std::size_t support_vector_count() const { return svs_.size(); }
  std::size_t pattern_count() const { return patterns_.size(); }

  // Mean <s, x> over support vectors with positive coefficient; 1 when there
  // are none.
  double positive_similarity(const Eigen::VectorXd& x) const;

  // Largest violation of the dual optimality conditions over all stored
  // patterns; 0 at the optimum of the current working set.
  double kkt_gap() const;
  double dual_objective() const;

  void serialize(std::ostream& out) const;

 private:
  using PatternPtr = std::shared_ptr<const SupportPattern>;
  struct SupportVector {
    PatternPtr pattern;
    int y = 0;
    double beta = 0.0;
    double grad = 0.0;
  };

  auto column(const SupportVector& sv) const { return sv.pattern->x.col(sv.y); }
  double loss(const SupportVector& sv) const { return sv.pattern->loss[sv.y]; }
  double bound(const SupportVector& sv) const { return sv.y == sv.pattern->label ? params_.c : 0.0; }

  std::pair<int, double> min_gradient(const SupportPattern& p) const;
  int add_support_vector(const PatternPtr& p, int y, double grad);
  void remove_support_vector(int index);
  void smo_step(int ipos, int ineg);
  void process_new(const PatternPtr& p);
  void process_old();
  void optimize();
  void reprocess();
  void budget_maintenance();
  void refresh_weights();
  void refresh_gradients();
  std::size_t pick_pattern();

  StructuredSvmParams params_;
  Eigen::VectorXd h_;
  std::vector<PatternPtr> patterns_;  // shared and immutable, so copies are cheap
  std::vector<SupportVector> svs_;
  Eigen::MatrixXd kernel_;  // cached <x_i, x_j> over support vectors
  std::mt19937_64 rng_;
};

}  // namespace wpg
