#include "wpg/descriptor.hpp"

#include <cmath>

#include "wpg/error.hpp"

namespace wpg {

InteriorWeights interior_weights(const Eigen::VectorXd& node_weights) {
  if (node_weights.size() != kNodeCount) {
    throw Error(ErrorKind::kInput, "expected " + std::to_string(kNodeCount) + " node weights");
  }
  InteriorWeights out;
  const auto& nodes = PatchLayout::interior_nodes();
  for (int i = 0; i < kInteriorCount; ++i) out(i) = node_weights(nodes[i]);
  return out;
}

InteriorWeights sigmoid_weights(const InteriorWeights& w, double sigma) {
  if ((w.array() < 0.0).any() || !w.allFinite()) throw Error(ErrorKind::kParameter, "weights must be finite and >= 0");
  const double total = w.sum();
  InteriorWeights normalised =
      total > 0.0 ? InteriorWeights(w / total) : InteriorWeights::Constant(1.0 / kInteriorCount);
  return normalised.unaryExpr([sigma](double v) { return 1.0 / (1.0 + std::exp(-sigma * v)); });
}

WeightedDescriptor weighted_descriptor(const FeatureMatrix& interior, const InteriorWeights& w_hat) {
  if (interior.rows() != kDescriptorDim || interior.cols() != kInteriorCount) {
    throw Error(ErrorKind::kInput, "interior descriptors must be 32 x 64");
  }
  WeightedDescriptor out(kWeightedDim);
  for (int i = 0; i < kInteriorCount; ++i) {
    out.segment(i * kDescriptorDim, kDescriptorDim) = w_hat(i) * interior.col(i);
  }
  const double norm = out.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::kDegenerateDescriptor, "weighted descriptor is all zero");
  return out / norm;
}

}  // namespace wpg
