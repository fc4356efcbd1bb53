#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "wpg/descriptor.hpp"
#include "wpg/frames.hpp"
#include "wpg/geometry.hpp"
#include "wpg/graphlearn.hpp"
#include "wpg/patches.hpp"
#include "wpg/scale.hpp"
#include "wpg/structured_svm.hpp"

namespace wpg {

enum class TrackerVariant {
  kFull,
  kNoAffinity,      // graph weights diffused through |Z|
  kRidgeZ,
  kRidgeE,
  kUniformWeights,  // no graph solve, every patch weight is 1
};

std::string_view to_string(TrackerVariant v);
// Accepts "full", "wpg_a", "wpg_z", "wpg_e", "wpg_w".
TrackerVariant parse_tracker_variant(std::string_view name);

struct TrackerParams {
  GraphSolverParams graph;
  TrackerVariant variant = TrackerVariant::kFull;
  double omega = 0.67;   // blend of the current and the first-frame models
  double theta = 0.25;   // confidence gate
  double sigma = 37.0;   // sigmoid slope of the patch weights
  double window_scale = 0.8;
  double abrupt_window_scale = 1.0;
  double abrupt_motion = 5.0;  // px, original coordinates
  int stride = 2;
  int polar_radii = 5;
  int polar_angles = 16;
  StructuredSvmParams svm;
  ScaleSamplingParams sampling;
  ScaleTrainingParams scale_training;
  int scale_interval = 3;
  bool gate_below_theta = false;  // update when confidence < theta instead
  double min_side = kMinBoxSide;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SearchWindow {
  double cx = 0.0;
  double cy = 0.0;
  double side = 0.0;
  int stride = 2;
};

struct TrackerModel {
  StructuredSvm h;
  Eigen::VectorXd h0;
  Eigen::VectorXd g;
  Eigen::VectorXd g0;
  InteriorWeights w_hat = InteriorWeights::Ones();

  void serialize(std::ostream& out) const;
};

// Window centred on the previous box; the side grows after abrupt motion.
SearchWindow search_window(const BoundingBox& prev, bool abrupt, const TrackerParams& p);

// Boxes of prev's size on the window's stride grid, row-major.
std::vector<BoundingBox> translation_candidates(const BoundingBox& prev, const SearchWindow& window);

// b followed by translated copies on a polar grid (radii up to `radius`).
std::vector<BoundingBox> polar_constraint_boxes(const BoundingBox& b, double radius, int radii, int angles);

// Argmax of omega<h, x> + (1-omega)<h0, x> over the candidates; ties go to the
// smaller displacement, then to the earlier candidate. Throws a geometry
// error when the window misses the frame.
BoundingBox estimate_translation(const FrameFeatures& features, const BoundingBox& prev, const TrackerModel& model,
                                 const SearchWindow& window, double omega);

// Argmax of the blended scale classifier over `candidates`, first wins ties.
BoundingBox estimate_scale(const FrameFeatures& features, const std::vector<BoundingBox>& candidates,
                           const TrackerModel& model, double omega);

WeightedDescriptor describe_box(const FrameFeatures& features, const BoundingBox& box, const InteriorWeights& w_hat);

// Mean similarity to the positive support vectors; 1 with none.
double confidence(const WeightedDescriptor& x, const TrackerModel& model);

struct FrameResult {
  int index = 0;
  BoundingBox box;  // original coordinates
  double confidence = 0.0;
  bool updated = false;
  bool failed = false;
  std::string message;
};

// Weighted patch graph tracker. Boxes in and out are in original frame
// coordinates; each frame is processed at a scale where the previous box's
// shorter side is at most min_side.
class WpgTracker {
 public:
  explicit WpgTracker(TrackerParams params = {});

  FrameResult initialize(const Frame& frame, const BoundingBox& box);
  // Never throws on tracking failures: the previous box is returned with the
  // model untouched and the reason in FrameResult::message.
  FrameResult track(const Frame& frame);

  const TrackerParams& params() const { return params_; }
  const TrackerModel& model() const { return model_; }
  const BoundingBox& box() const { return box_; }
  int frame_index() const { return frame_; }
  // Side of the window used on the last tracked frame, original coordinates.
  double last_window_side() const { return last_window_side_; }

  void serialize_model(std::ostream& out) const;

  // Patch weights learned at `box` (working coordinates of `features`).
  InteriorWeights learn_weights(const FrameFeatures& features, const BoundingBox& box) const;

 private:
  struct PendingUpdate {
    InteriorWeights w_hat;
    SupportPattern pattern;
    bool train_scale = false;
    Eigen::VectorXd g;
  };

  PendingUpdate prepare_update(const FrameFeatures& features, const BoundingBox& box, int frame,
                               bool train_scale) const;
  void apply_update(PendingUpdate&& update);
  std::mt19937_64 frame_rng(int frame, int stream) const;

  TrackerParams params_;
  TrackerModel model_;
  BoundingBox box_;
  int frame_ = -1;
  double last_displacement_ = 0.0;
  double last_window_side_ = 0.0;
};

}  // namespace wpg
