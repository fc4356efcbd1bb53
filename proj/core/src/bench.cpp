#include "wpg/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "wpg/error.hpp"

namespace wpg {
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r' || ch == ';') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed: " + path.string());
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::vector<BoundingBox> parse_ground_truth(std::istream& in, const std::string& source) {
  std::vector<BoundingBox> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    auto fail = [&](const std::string& why) {
      throw Error(ErrorKind::kFormat, source + ":" + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 4) fail("expected 4 fields, got " + std::to_string(fields.size()));
    double v[4];
    for (int k = 0; k < 4; ++k) {
      std::size_t used = 0;
      try {
        v[k] = std::stod(fields[k], &used);
      } catch (const std::exception&) {
        fail("not a number: '" + fields[k] + "'");
      }
      if (used != fields[k].size() || !std::isfinite(v[k])) fail("not a number: '" + fields[k] + "'");
    }
    if (!(v[2] > 0.0 && v[3] > 0.0)) fail("box width and height must be positive");
    out.push_back({v[0] - 1.0, v[1] - 1.0, v[2], v[3]});
  }
  return out;
}

std::vector<std::string> parse_attributes(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    for (auto& tag : split_fields(line)) {
      if (std::find(out.begin(), out.end(), tag) == out.end()) out.push_back(std::move(tag));
    }
  }
  return out;
}

SequenceSpec load_otb_sequence(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::kInput, "sequence directory not found: " + dir.string());
  SequenceSpec spec;
  spec.directory = dir;
  spec.name = fs::path(dir).lexically_normal().filename().string();
  if (spec.name.empty()) spec.name = fs::path(dir).lexically_normal().parent_path().filename().string();

  const fs::path gt = dir / "groundtruth_rect.txt";
  std::ifstream gt_in(gt);
  if (!gt_in) throw Error(ErrorKind::kInput, "missing ground truth: " + gt.string());
  spec.truth = parse_ground_truth(gt_in, gt.string());

  const fs::path img = fs::is_directory(dir / "img") ? dir / "img" : dir;
  spec.frames = list_frame_files(img);
  if (spec.frames.empty()) throw Error(ErrorKind::kEmptySequence, "no frames in " + img.string());
  if (spec.frames.size() != spec.truth.size()) {
    throw Error(ErrorKind::kFormat, gt.string() + ": " + std::to_string(spec.truth.size()) + " boxes for " +
                                        std::to_string(spec.frames.size()) + " frames");
  }

  std::ifstream attr(dir / "attributes.txt");
  if (attr) spec.attributes = parse_attributes(attr);
  return spec;
}

EvalRecord make_record(const BoundingBox& predicted, const BoundingBox& truth) {
  return {predicted, truth, center_distance(predicted, truth), iou(predicted, truth)};
}

std::vector<double> precision_curve(const std::vector<EvalRecord>& records) {
  if (records.empty()) throw Error(ErrorKind::kInput, "precision needs at least one record");
  std::vector<double> curve(kPrecisionThresholds, 0.0);
  for (int t = 0; t < kPrecisionThresholds; ++t) {
    const auto hits = std::count_if(records.begin(), records.end(),
                                    [t](const EvalRecord& r) { return r.center_error <= t; });
    curve[t] = static_cast<double>(hits) / static_cast<double>(records.size());
  }
  return curve;
}

SuccessCurve success_curve(const std::vector<EvalRecord>& records) {
  if (records.empty()) throw Error(ErrorKind::kInput, "success needs at least one record");
  SuccessCurve out;
  out.values.assign(kSuccessThresholds, 0.0);
  for (int i = 0; i < kSuccessThresholds; ++i) {
    const double theta = i / 20.0;
    const auto hits =
        std::count_if(records.begin(), records.end(), [theta](const EvalRecord& r) { return r.overlap > theta; });
    out.values[i] = static_cast<double>(hits) / static_cast<double>(records.size());
  }
  double sum = 0.0;
  for (double v : out.values) sum += v;
  out.auc = sum / kSuccessThresholds;
  out.at_half = out.values[10];
  return out;
}

void WpgOpeTracker::initialize(const Frame& frame, const BoundingBox& box) {
  results_.clear();
  results_.push_back(tracker_.initialize(frame, box));
}

BoundingBox WpgOpeTracker::track(const Frame& frame) {
  results_.push_back(tracker_.track(frame));
  return results_.back().box;
}

SequenceReport run_ope(const std::string& name, std::size_t frame_count, const FrameSource& frames,
                       const std::vector<BoundingBox>& truth, OpeTracker& tracker,
                       std::vector<std::string> attributes) {
  if (frame_count == 0) throw Error(ErrorKind::kEmptySequence, "sequence '" + name + "' has no frames");
  if (truth.size() != frame_count) throw Error(ErrorKind::kInput, "ground truth count differs from frame count");

  SequenceReport report;
  report.name = name;
  report.attributes = std::move(attributes);
  report.records.reserve(frame_count);

  using Clock = std::chrono::steady_clock;
  Clock::duration busy{};
  const Frame first = frames(0);
  auto start = Clock::now();
  tracker.initialize(first, truth[0]);
  busy += Clock::now() - start;
  report.records.push_back(make_record(truth[0], truth[0]));
  for (std::size_t i = 1; i < frame_count; ++i) {
    const Frame frame = frames(i);
    start = Clock::now();
    const BoundingBox box = tracker.track(frame);
    busy += Clock::now() - start;
    report.records.push_back(make_record(box, truth[i]));
  }
  const double seconds = std::chrono::duration<double>(busy).count();
  report.fps = static_cast<double>(frame_count) / std::max(seconds, 1e-9);
  report.precision = precision_curve(report.records);
  report.success = success_curve(report.records);
  report.pr = report.precision[kPrecisionScoreThreshold];
  return report;
}

SequenceReport run_ope(const SequenceSpec& spec, OpeTracker& tracker) {
  return run_ope(
      spec.name, spec.frames.size(), [&spec](std::size_t i) { return decode_image(spec.frames[i]); }, spec.truth,
      tracker, spec.attributes);
}

namespace {

AttributeGroup mean_of(const std::vector<const SequenceReport*>& reports, std::string tag) {
  AttributeGroup g;
  g.tag = std::move(tag);
  g.sequences = static_cast<int>(reports.size());
  if (reports.empty()) return g;
  for (const auto* r : reports) {
    g.pr += r->pr;
    g.sr_auc += r->success.auc;
    g.sr_half += r->success.at_half;
  }
  g.pr /= g.sequences;
  g.sr_auc /= g.sequences;
  g.sr_half /= g.sequences;
  return g;
}

}  // namespace

AttributeGroup group_by_attribute(const std::vector<SequenceReport>& reports, const std::string& tag) {
  std::vector<const SequenceReport*> members;
  for (const auto& r : reports) {
    if (std::find(r.attributes.begin(), r.attributes.end(), tag) != r.attributes.end()) members.push_back(&r);
  }
  return mean_of(members, tag);
}

AttributeGroup aggregate(const std::vector<SequenceReport>& reports) {
  std::vector<const SequenceReport*> all;
  for (const auto& r : reports) all.push_back(&r);
  return mean_of(all, "ALL");
}

void emit_plot_data(const std::vector<double>& precision, const SuccessCurve& success, const fs::path& prefix) {
  if (precision.size() != kPrecisionThresholds || success.values.size() != kSuccessThresholds) {
    throw Error(ErrorKind::kInput, "curves have the wrong number of samples");
  }
  std::ostringstream pr;
  pr << "# threshold_px,precision PR(20)=" << fixed(precision[kPrecisionScoreThreshold], 3) << '\n';
  for (int t = 0; t < kPrecisionThresholds; ++t) pr << t << ',' << fixed(precision[t], 6) << '\n';
  std::ostringstream sr;
  sr << "# overlap_threshold,success AUC=" << fixed(success.auc, 3) << " SR(0.5)=" << fixed(success.at_half, 3)
     << '\n';
  for (int i = 0; i < kSuccessThresholds; ++i) sr << fixed(i / 20.0, 2) << ',' << fixed(success.values[i], 6) << '\n';

  const fs::path parent = prefix.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw Error(ErrorKind::kIo, "output directory does not exist: " + parent.string());
  }
  write_text(fs::path(prefix.string() + "_precision.csv"), pr.str());
  write_text(fs::path(prefix.string() + "_success.csv"), sr.str());
}

}  // namespace wpg
