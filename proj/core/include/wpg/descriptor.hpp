#pragma once

#include <Eigen/Core>

#include "wpg/patches.hpp"

namespace wpg {

inline constexpr int kWeightedDim = kInteriorCount * kDescriptorDim;  // 2048
inline constexpr double kDefaultSigma = 37.0;

using InteriorWeights = Eigen::Matrix<double, kInteriorCount, 1>;
using WeightedDescriptor = Eigen::VectorXd;  // kWeightedDim entries, unit norm

// Node weights of the 100-node graph restricted to the 64 interior nodes.
InteriorWeights interior_weights(const Eigen::VectorXd& node_weights);

// w_hat_i = 1 / (1 + exp(-sigma * w_i / sum(w))); a zero sum falls back to a
// uniform distribution. Throws a parameter error on negative entries.
InteriorWeights sigmoid_weights(const InteriorWeights& w, double sigma = kDefaultSigma);

// Concatenation of the 64 interior descriptors, block i scaled by w_hat_i,
// then L2-normalised. `interior` is kDescriptorDim x 64. Throws a
// degenerate-descriptor error when the result is all zero.
WeightedDescriptor weighted_descriptor(const FeatureMatrix& interior, const InteriorWeights& w_hat);

}  // namespace wpg
