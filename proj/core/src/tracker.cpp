#include "wpg/tracker.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "wpg/error.hpp"

namespace wpg {
namespace {

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

void put_vector(std::ostream& out, const Eigen::VectorXd& v) {
  put(out, static_cast<std::int64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
}

BoundingBox frame_rect(const FrameFeatures& f) {
  return {0.0, 0.0, static_cast<double>(f.width()), static_cast<double>(f.height())};
}

Frame working_frame(const Frame& frame, const ScalePlan& plan) {
  if (plan.scale == 1.0) return frame;
  const int w = std::max(1, static_cast<int>(std::lround(frame.width() * plan.scale)));
  const int h = std::max(1, static_cast<int>(std::lround(frame.height() * plan.scale)));
  return resize_bilinear(frame, w, h);
}

double blended(const Eigen::VectorXd& current, const Eigen::VectorXd& initial, const Eigen::VectorXd& x,
               double omega) {
  return omega * current.dot(x) + (1.0 - omega) * initial.dot(x);
}

}  // namespace

std::string_view to_string(TrackerVariant v) {
  switch (v) {
    case TrackerVariant::kFull: return "full";
    case TrackerVariant::kNoAffinity: return "wpg_a";
    case TrackerVariant::kRidgeZ: return "wpg_z";
    case TrackerVariant::kRidgeE: return "wpg_e";
    case TrackerVariant::kUniformWeights: return "wpg_w";
  }
  return "unknown";
}

TrackerVariant parse_tracker_variant(std::string_view name) {
  if (name == "wpg_w") return TrackerVariant::kUniformWeights;
  switch (parse_solver_variant(name)) {
    case SolverVariant::kFull: return TrackerVariant::kFull;
    case SolverVariant::kNoAffinity: return TrackerVariant::kNoAffinity;
    case SolverVariant::kRidgeZ: return TrackerVariant::kRidgeZ;
    case SolverVariant::kRidgeE: return TrackerVariant::kRidgeE;
  }
  throw Error(ErrorKind::kParameter, "unknown variant");
}

void TrackerParams::validate() const {
  graph.validate(kNodeCount);
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw Error(ErrorKind::kParameter, msg);
  };
  require(omega >= 0.0 && omega <= 1.0, "omega must lie in [0, 1]");
  require(std::isfinite(theta), "theta must be finite");
  require(sigma > 0.0, "sigma must be positive");
  require(window_scale > 0.0 && abrupt_window_scale > 0.0, "window scales must be positive");
  require(abrupt_motion >= 0.0, "abrupt motion threshold must be >= 0");
  require(stride >= 1, "stride must be >= 1");
  require(polar_radii >= 1 && polar_angles >= 1, "polar grid needs at least one radius and angle");
  require(scale_interval >= 1, "scale interval must be >= 1");
  require(min_side >= kGridSide, "min side must allow one pixel per patch");
}

void TrackerModel::serialize(std::ostream& out) const {
  h.serialize(out);
  put_vector(out, h0);
  put_vector(out, g);
  put_vector(out, g0);
  put_vector(out, w_hat);
}

SearchWindow search_window(const BoundingBox& prev, bool abrupt, const TrackerParams& p) {
  const double base = std::sqrt(prev.w * prev.h);
  return {prev.cx(), prev.cy(), (abrupt ? p.abrupt_window_scale : p.window_scale) * base, p.stride};
}

std::vector<BoundingBox> translation_candidates(const BoundingBox& prev, const SearchWindow& window) {
  const int reach = static_cast<int>(std::floor(0.5 * window.side / window.stride));
  std::vector<BoundingBox> out;
  out.reserve(static_cast<std::size_t>(2 * reach + 1) * (2 * reach + 1));
  for (int j = -reach; j <= reach; ++j) {
    for (int i = -reach; i <= reach; ++i) {
      out.push_back(BoundingBox::centered(window.cx + i * window.stride, window.cy + j * window.stride, prev.w, prev.h));
    }
  }
  return out;
}

std::vector<BoundingBox> polar_constraint_boxes(const BoundingBox& b, double radius, int radii, int angles) {
  std::vector<BoundingBox> out{b};
  for (int r = 1; r <= radii; ++r) {
    const double dist = radius * r / radii;
    for (int t = 0; t < angles; ++t) {
      const double phi = 2.0 * std::numbers::pi * t / angles;
      out.push_back({b.lx + dist * std::cos(phi), b.ly + dist * std::sin(phi), b.w, b.h});
    }
  }
  return out;
}

WeightedDescriptor describe_box(const FrameFeatures& features, const BoundingBox& box, const InteriorWeights& w_hat) {
  return weighted_descriptor(interior_descriptors(features, box), w_hat);
}

BoundingBox estimate_translation(const FrameFeatures& features, const BoundingBox& prev, const TrackerModel& model,
                                 const SearchWindow& window, double omega) {
  const BoundingBox area = BoundingBox::centered(window.cx, window.cy, window.side, window.side);
  if (intersection_area(area, frame_rect(features)) <= 0.0) {
    throw Error(ErrorKind::kGeometry, "search window lies outside the frame");
  }
  const auto candidates = translation_candidates(prev, window);
  const Eigen::VectorXd& h = model.h.weights();
  BoundingBox best = prev;
  double best_score = -std::numeric_limits<double>::infinity();
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    const double s = blended(h, model.h0, describe_box(features, c, model.w_hat), omega);
    const double d = center_distance(c, prev);
    if (s > best_score || (s == best_score && d < best_dist)) {
      best = c;
      best_score = s;
      best_dist = d;
    }
  }
  return best;
}

BoundingBox estimate_scale(const FrameFeatures& features, const std::vector<BoundingBox>& candidates,
                           const TrackerModel& model, double omega) {
  if (candidates.empty()) throw Error(ErrorKind::kInput, "no scale candidates");
  BoundingBox best = candidates.front();
  double best_score = -std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    const double s = blended(model.g, model.g0, describe_box(features, c, model.w_hat), omega);
    if (s > best_score) {
      best = c;
      best_score = s;
    }
  }
  return best;
}

double confidence(const WeightedDescriptor& x, const TrackerModel& model) { return model.h.positive_similarity(x); }

WpgTracker::WpgTracker(TrackerParams params) : params_(std::move(params)) { params_.validate(); }

std::mt19937_64 WpgTracker::frame_rng(int frame, int stream) const {
  std::seed_seq seq{static_cast<std::uint32_t>(params_.seed), static_cast<std::uint32_t>(params_.seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(frame)};
  return std::mt19937_64(seq);
}

InteriorWeights WpgTracker::learn_weights(const FrameFeatures& features, const BoundingBox& box) const {
  if (params_.variant == TrackerVariant::kUniformWeights) return InteriorWeights::Ones();
  const PatchFeatures pf = feature_matrix(features, box);
  SolverVariant sv = SolverVariant::kFull;
  switch (params_.variant) {
    case TrackerVariant::kNoAffinity: sv = SolverVariant::kNoAffinity; break;
    case TrackerVariant::kRidgeZ: sv = SolverVariant::kRidgeZ; break;
    case TrackerVariant::kRidgeE: sv = SolverVariant::kRidgeE; break;
    default: break;
  }
  const GraphSolution sol = solve_variant(pf.x, init_seeds(pf.layout), params_.graph, sv);
  return sigmoid_weights(interior_weights(sol.w), params_.sigma);
}

WpgTracker::PendingUpdate WpgTracker::prepare_update(const FrameFeatures& features, const BoundingBox& box, int frame,
                                                     bool train_scale) const {
  PendingUpdate up;
  up.w_hat = learn_weights(features, box);

  const double radius = 0.5 * search_window(box, false, params_).side;
  const auto boxes = polar_constraint_boxes(box, radius, params_.polar_radii, params_.polar_angles);
  up.pattern.x.resize(kWeightedDim, static_cast<Eigen::Index>(boxes.size()));
  up.pattern.loss.resize(boxes.size());
  for (std::size_t k = 0; k < boxes.size(); ++k) {
    up.pattern.x.col(static_cast<Eigen::Index>(k)) = describe_box(features, boxes[k], up.w_hat);
    up.pattern.loss[k] = overlap_loss(boxes[k], box);
  }
  up.pattern.label = 0;

  up.train_scale = train_scale;
  if (train_scale) {
    const auto samples = scale_training_boxes(box);
    Eigen::MatrixXd x(kWeightedDim, static_cast<Eigen::Index>(samples.size()));
    Eigen::VectorXd loss(static_cast<Eigen::Index>(samples.size()));
    for (std::size_t k = 0; k < samples.size(); ++k) {
      x.col(static_cast<Eigen::Index>(k)) = describe_box(features, samples[k], up.w_hat);
      loss(static_cast<Eigen::Index>(k)) = overlap_loss(samples[k], box);
    }
    const Eigen::VectorXd x_star = up.pattern.x.col(0);
    auto rng = frame_rng(frame, 2);
    const Eigen::VectorXd g_start = model_.g.size() == kWeightedDim ? model_.g : Eigen::VectorXd::Zero(kWeightedDim);
    up.g = train_scale_classifier(g_start, x, x_star, loss, params_.scale_training, rng).g;
  }
  return up;
}

void WpgTracker::apply_update(PendingUpdate&& up) {
  model_.w_hat = up.w_hat;
  model_.h.update(std::move(up.pattern));
  if (up.train_scale) model_.g = std::move(up.g);
}

FrameResult WpgTracker::initialize(const Frame& frame, const BoundingBox& box) {
  if (!box.valid()) throw Error(ErrorKind::kGeometry, "initial box must have positive size");
  const RescaledFrame rf = rescale_for_min_side(frame, box, params_.min_side);
  const FrameFeatures features(rf.frame);

  TrackerModel previous = std::move(model_);
  try {
    StructuredSvmParams svm = params_.svm;
    svm.seed = params_.seed;
    model_ = TrackerModel{};
    model_.h = StructuredSvm(kWeightedDim, svm);
    model_.g = Eigen::VectorXd::Zero(kWeightedDim);
    apply_update(prepare_update(features, rf.box, 0, true));
    model_.h0 = model_.h.weights();
    model_.g0 = model_.g;
  } catch (...) {
    model_ = std::move(previous);
    throw;
  }

  box_ = box;
  frame_ = 0;
  last_displacement_ = 0.0;
  last_window_side_ = 0.0;
  FrameResult r;
  r.box = box;
  r.confidence = 1.0;
  r.updated = true;
  return r;
}

FrameResult WpgTracker::track(const Frame& frame) {
  if (frame_ < 0) throw Error(ErrorKind::kInput, "tracker is not initialised");
  const int t = frame_ + 1;
  FrameResult r;
  r.index = t;
  try {
    const ScalePlan plan = plan_for_box(box_, params_.min_side);
    const FrameFeatures features(working_frame(frame, plan));
    const BoundingBox prev = plan.to_working(box_);

    const SearchWindow window = search_window(prev, last_displacement_ > params_.abrupt_motion, params_);
    const BoundingBox b_hat = estimate_translation(features, prev, model_, window, params_.omega);

    const bool scale_frame = t % params_.scale_interval == 0;
    BoundingBox b_star = b_hat;
    if (scale_frame) {
      auto rng = frame_rng(t, 1);
      const auto candidates = sample_scale_candidates(b_hat, features.width(), features.height(), params_.sampling, rng);
      b_star = estimate_scale(features, candidates, model_, params_.omega);
    }

    const double conf = confidence(describe_box(features, b_star, model_.w_hat), model_);
    const bool gate = params_.gate_below_theta ? conf < params_.theta : conf > params_.theta;
    PendingUpdate up;
    if (gate) up = prepare_update(features, b_star, t, scale_frame);

    // Nothing below throws for valid state.
    if (gate) apply_update(std::move(up));
    const BoundingBox out = plan.to_original(b_star);
    last_displacement_ = center_distance(out, box_);
    last_window_side_ = window.side / plan.scale;
    box_ = out;
    r.box = out;
    r.confidence = conf;
    r.updated = gate;
  } catch (const Error& e) {
    last_displacement_ = 0.0;
    r.box = box_;
    r.failed = true;
    r.message = e.what();
  }
  frame_ = t;
  return r;
}

void WpgTracker::serialize_model(std::ostream& out) const { model_.serialize(out); }

}  // namespace wpg
