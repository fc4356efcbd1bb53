#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "wpg/error.hpp"
#include "wpg/synthetic.hpp"
#include "wpg/tracker.hpp"

namespace wpg {
namespace {

std::string model_bytes(const WpgTracker& t) {
  std::ostringstream out;
  t.serialize_model(out);
  return out.str();
}

synthetic::Sequence short_linear(int frames, double vx, double vy) {
  synthetic::LinearMotionOptions opt;
  opt.frames = frames;
  opt.width = 200;
  opt.height = 160;
  opt.vx = vx;
  opt.vy = vy;
  opt.occlusion_start = -1;
  return synthetic::linear_motion(opt);
}

TEST(Tracker, VariantNames) {
  for (auto v : {TrackerVariant::kFull, TrackerVariant::kNoAffinity, TrackerVariant::kRidgeZ, TrackerVariant::kRidgeE,
                 TrackerVariant::kUniformWeights})
    EXPECT_EQ(parse_tracker_variant(to_string(v)), v);
  EXPECT_EQ(parse_tracker_variant("wpg_w"), TrackerVariant::kUniformWeights);
  EXPECT_THROW(parse_tracker_variant("x"), Error);
}

TEST(Tracker, ParameterValidation) {
  TrackerParams p;
  p.omega = 1.5;
  EXPECT_THROW(WpgTracker{p}, Error);
  p = {};
  p.stride = 0;
  EXPECT_THROW(WpgTracker{p}, Error);
  EXPECT_NO_THROW(WpgTracker{TrackerParams{}});
}

TEST(Tracker, SearchWindowGrowsAfterAbruptMotion) {
  const TrackerParams p;
  const BoundingBox b{0, 0, 32, 50};
  EXPECT_NEAR(search_window(b, false, p).side, 0.8 * std::sqrt(32.0 * 50.0), 1e-12);
  EXPECT_NEAR(search_window(b, true, p).side, std::sqrt(32.0 * 50.0), 1e-12);
  EXPECT_EQ(search_window(b, false, p).cx, b.cx());
}

TEST(Tracker, TranslationCandidatesAreRowMajorGrid) {
  const BoundingBox b{10, 10, 32, 32};
  const SearchWindow w{26, 26, 25.6, 2};
  const auto c = translation_candidates(b, w);
  ASSERT_EQ(c.size(), 13u * 13u);  // reach floor(12.8 / 2) = 6
  EXPECT_DOUBLE_EQ(c.front().cx(), 26 - 12);
  EXPECT_DOUBLE_EQ(c.front().cy(), 26 - 12);
  EXPECT_DOUBLE_EQ(c[1].cx(), 26 - 10);
  EXPECT_EQ(c[c.size() / 2], b);
  for (const auto& x : c) EXPECT_EQ(x.w, b.w);
}

TEST(Tracker, PolarConstraintBoxes) {
  const BoundingBox b{50, 50, 32, 32};
  const auto boxes = polar_constraint_boxes(b, 10.0, 5, 16);
  ASSERT_EQ(boxes.size(), 1u + 5u * 16u);
  EXPECT_EQ(boxes[0], b);
  for (int r = 1; r <= 5; ++r)
    for (int t = 0; t < 16; ++t) EXPECT_NEAR(center_distance(boxes[1 + (r - 1) * 16 + t], b), 2.0 * r, 1e-9);
}

TEST(Tracker, ZeroModelKeepsPreviousBox) {
  Frame f(100, 100);
  const FrameFeatures feat(f);
  TrackerModel m;
  m.h = StructuredSvm(kWeightedDim, {});
  m.h0 = Eigen::VectorXd::Zero(kWeightedDim);
  m.g = m.g0 = Eigen::VectorXd::Zero(kWeightedDim);
  f.fill_rect({0, 0, 100, 100}, 10, 200, 30);
  const BoundingBox prev{30, 30, 32, 32};
  const FrameFeatures textured(f);
  EXPECT_EQ(estimate_translation(textured, prev, m, search_window(prev, false, TrackerParams{}), 0.67), prev);
  const std::vector<BoundingBox> cands{prev, {31, 31, 30, 30}};
  EXPECT_EQ(estimate_scale(textured, cands, m, 0.67), prev);
  try {
    estimate_translation(feat, {500, 500, 32, 32}, m, search_window({500, 500, 32, 32}, false, TrackerParams{}), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kGeometry);
  }
}

TEST(Tracker, TrackBeforeInitialiseThrows) {
  WpgTracker t;
  EXPECT_THROW(t.track(Frame(10, 10)), Error);
}

TEST(Tracker, FailedInitialiseKeepsModel) {
  const auto seq = short_linear(2, 2.0, 0.0);
  WpgTracker t;
  t.initialize(seq.frames[0], seq.truth[0]);
  const std::string before = model_bytes(t);
  EXPECT_THROW(t.initialize(seq.frames[0], {5000, 5000, 60, 60}), Error);
  EXPECT_EQ(model_bytes(t), before);
  EXPECT_EQ(t.frame_index(), 0);
}

TEST(Tracker, FailureReturnsPreviousBox) {
  const auto seq = short_linear(2, 2.0, 0.0);
  WpgTracker t;
  t.initialize(seq.frames[0], seq.truth[0]);
  const std::string before = model_bytes(t);
  // A frame too small to contain the search window.
  const FrameResult r = t.track(Frame(4, 4));
  EXPECT_TRUE(r.failed);
  EXPECT_FALSE(r.message.empty());
  EXPECT_EQ(r.box, seq.truth[0]);
  EXPECT_EQ(model_bytes(t), before);
  EXPECT_EQ(t.frame_index(), 1);
}

TEST(Tracker, GateControlsUpdates) {
  const auto seq = short_linear(4, 2.0, 1.0);
  for (bool literal : {false, true}) {
    for (double theta : {-10.0, 10.0}) {
      TrackerParams p;
      p.theta = theta;
      p.gate_below_theta = literal;
      WpgTracker t(p);
      t.initialize(seq.frames[0], seq.truth[0]);
      const bool expect = literal ? theta > 0 : theta < 0;
      for (int k = 1; k < 4; ++k) {
        const std::string before = model_bytes(t);
        const FrameResult r = t.track(seq.frames[k]);
        ASSERT_FALSE(r.failed) << r.message;
        EXPECT_EQ(r.updated, expect);
        if (!expect) {
          EXPECT_EQ(model_bytes(t), before);
        }
      }
    }
  }
}

TEST(Tracker, ScaleClassifierRetrainsOnScaleFramesOnly) {
  const auto seq = short_linear(7, 2.0, 1.0);
  TrackerParams p;
  p.theta = -10.0;
  WpgTracker t(p);
  t.initialize(seq.frames[0], seq.truth[0]);
  for (int k = 1; k < 7; ++k) {
    const Eigen::VectorXd g = t.model().g;
    const FrameResult r = t.track(seq.frames[k]);
    ASSERT_TRUE(r.updated);
    if (k % 3 == 0) {
      EXPECT_NE(t.model().g, g) << "frame " << k;
    } else {
      EXPECT_EQ(t.model().g, g) << "frame " << k;
    }
  }
}

TEST(Tracker, AbruptMotionWidensWindow) {
  const auto seq = short_linear(6, 7.0, 0.0);
  WpgTracker t;
  t.initialize(seq.frames[0], seq.truth[0]);
  BoundingBox prev = seq.truth[0];
  double prev_disp = 0.0;
  for (int k = 1; k < 6; ++k) {
    const FrameResult r = t.track(seq.frames[k]);
    ASSERT_FALSE(r.failed);
    const double base = std::sqrt(prev.w * prev.h);
    EXPECT_NEAR(t.last_window_side(), (prev_disp > 5.0 ? 1.0 : 0.8) * base, 1e-9) << "frame " << k;
    prev_disp = center_distance(r.box, prev);
    prev = r.box;
  }
}

TEST(Tracker, DeterministicForSeed) {
  const auto seq = short_linear(5, 2.0, 1.0);
  auto run = [&] {
    WpgTracker t;
    t.initialize(seq.frames[0], seq.truth[0]);
    std::ostringstream out;
    for (int k = 1; k < 5; ++k) out << t.track(seq.frames[k]).box << '\n';
    t.serialize_model(out);
    return out.str();
  };
  EXPECT_EQ(run(), run());
}

TEST(Tracker, FollowsSlowTarget) {
  const auto seq = short_linear(8, 2.0, 1.5);
  WpgTracker t;
  t.initialize(seq.frames[0], seq.truth[0]);
  for (int k = 1; k < 8; ++k) EXPECT_LE(center_distance(t.track(seq.frames[k]).box, seq.truth[k]), 5.0);
}

}  // namespace
}  // namespace wpg
