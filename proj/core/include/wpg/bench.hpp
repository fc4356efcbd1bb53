#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "wpg/frames.hpp"
#include "wpg/geometry.hpp"
#include "wpg/tracker.hpp"

namespace wpg {

// OTB-style sequence: frames under <dir>/img (or <dir> itself), one box per
// frame in groundtruth_rect.txt and optional tags in attributes.txt.
struct SequenceSpec {
  std::string name;
  std::filesystem::path directory;
  std::vector<std::filesystem::path> frames;
  std::vector<BoundingBox> truth;  // 0-based
  std::vector<std::string> attributes;
};

// One box per line, fields split by commas, tabs or spaces, 1-based x and y.
// Throws a format error with the line number on malformed lines.
std::vector<BoundingBox> parse_ground_truth(std::istream& in, const std::string& source);
std::vector<std::string> parse_attributes(std::istream& in);

SequenceSpec load_otb_sequence(const std::filesystem::path& dir);

struct EvalRecord {
  BoundingBox predicted;
  BoundingBox truth;
  double center_error = 0.0;
  double overlap = 0.0;
};

EvalRecord make_record(const BoundingBox& predicted, const BoundingBox& truth);

inline constexpr int kPrecisionThresholds = 51;  // 0..50 px
inline constexpr int kSuccessThresholds = 21;    // 0, 0.05, ..., 1
inline constexpr int kPrecisionScoreThreshold = 20;

// Fraction of frames with center error <= t for t = 0..50.
std::vector<double> precision_curve(const std::vector<EvalRecord>& records);

struct SuccessCurve {
  std::vector<double> values;  // fraction with IoU > i/20
  double auc = 0.0;            // mean of the sampled values
  double at_half = 0.0;        // value at overlap 0.5
};

SuccessCurve success_curve(const std::vector<EvalRecord>& records);

// Tracker driven by the one-pass evaluation loop.
class OpeTracker {
 public:
  virtual ~OpeTracker() = default;
  virtual void initialize(const Frame& frame, const BoundingBox& box) = 0;
  virtual BoundingBox track(const Frame& frame) = 0;
};

// Reports the ground truth of each frame; an oracle for the metric pipeline.
class GroundTruthEchoTracker : public OpeTracker {
 public:
  explicit GroundTruthEchoTracker(std::vector<BoundingBox> truth) : truth_(std::move(truth)) {}
  void initialize(const Frame&, const BoundingBox&) override { next_ = 1; }
  BoundingBox track(const Frame&) override { return truth_.at(next_++); }

 private:
  std::vector<BoundingBox> truth_;
  std::size_t next_ = 1;
};

// Never moves from the initial box.
class StaticBoxTracker : public OpeTracker {
 public:
  void initialize(const Frame&, const BoundingBox& box) override { box_ = box; }
  BoundingBox track(const Frame&) override { return box_; }

 private:
  BoundingBox box_;
};

class WpgOpeTracker : public OpeTracker {
 public:
  explicit WpgOpeTracker(TrackerParams params) : tracker_(std::move(params)) {}
  void initialize(const Frame& frame, const BoundingBox& box) override;
  BoundingBox track(const Frame& frame) override;
  const std::vector<FrameResult>& results() const { return results_; }

 private:
  WpgTracker tracker_;
  std::vector<FrameResult> results_;
};

struct SequenceReport {
  std::string name;
  std::vector<std::string> attributes;
  std::vector<EvalRecord> records;
  std::vector<double> precision;
  SuccessCurve success;
  double pr = 0.0;   // precision at 20 px
  double fps = 0.0;  // tracking throughput, wall clock
};

using FrameSource = std::function<Frame(std::size_t)>;

// One-pass evaluation: initialise on the first ground-truth box, then track
// every later frame without reinitialisation. The first frame counts as a
// record with the initial box.
SequenceReport run_ope(const std::string& name, std::size_t frame_count, const FrameSource& frames,
                       const std::vector<BoundingBox>& truth, OpeTracker& tracker,
                       std::vector<std::string> attributes = {});
SequenceReport run_ope(const SequenceSpec& spec, OpeTracker& tracker);

struct AttributeGroup {
  std::string tag;
  int sequences = 0;
  double pr = 0.0;
  double sr_auc = 0.0;
  double sr_half = 0.0;
  bool empty() const { return sequences == 0; }
};

// Mean scores over the reports tagged `tag`; an empty group when none is.
AttributeGroup group_by_attribute(const std::vector<SequenceReport>& reports, const std::string& tag);
// Mean scores over all reports.
AttributeGroup aggregate(const std::vector<SequenceReport>& reports);

// Writes <prefix>_precision.csv and <prefix>_success.csv: a legend header
// line followed by threshold,value lines.
void emit_plot_data(const std::vector<double>& precision, const SuccessCurve& success,
                    const std::filesystem::path& prefix);

}  // namespace wpg
