#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "metric_oracles.hpp"
#include "wpg/bench.hpp"
#include "wpg/error.hpp"
#include "wpg/synthetic.hpp"

namespace fs = std::filesystem;

namespace wpg {
namespace {

fs::path temp_dir(const std::string& tag) {
  std::random_device rd;
  const fs::path p = fs::temp_directory_path() / ("wpg_bench_" + tag + std::to_string(rd()));
  fs::create_directories(p);
  return p;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Bench, CurvesMatchBruteForce) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto records = test::random_records(1000, s);
    EXPECT_EQ(precision_curve(records), test::brute_precision(records));
    EXPECT_EQ(success_curve(records).values, test::brute_success(records));
  }
}

TEST(Bench, CurveMonotonicity) {
  const auto records = test::random_records(500, 9);
  const auto pr = precision_curve(records);
  const auto sr = success_curve(records);
  for (std::size_t t = 1; t < pr.size(); ++t) EXPECT_GE(pr[t], pr[t - 1]);
  for (std::size_t i = 1; i < sr.values.size(); ++i) EXPECT_LE(sr.values[i], sr.values[i - 1]);
  EXPECT_EQ(sr.values.back(), 0.0);
  double mean = 0.0;
  for (double v : sr.values) mean += v;
  EXPECT_NEAR(sr.auc, mean / sr.values.size(), 1e-15);
  EXPECT_EQ(sr.at_half, sr.values[10]);
}

TEST(Bench, ThresholdsAreInclusiveForPrecision) {
  const std::vector<EvalRecord> r{make_record({20, 0, 10, 10}, {0, 0, 10, 10})};
  const auto pr = precision_curve(r);
  EXPECT_EQ(pr[19], 0.0);
  EXPECT_EQ(pr[20], 1.0);
}

TEST(Bench, ParsesGroundTruthWithMixedSeparators) {
  std::istringstream in("1,1,10,20\n5\t6\t7\t8\n3 4 5 6\n\n");
  const auto boxes = parse_ground_truth(in, "gt.txt");
  ASSERT_EQ(boxes.size(), 3u);
  EXPECT_EQ(boxes[0], (BoundingBox{0, 0, 10, 20}));
  EXPECT_EQ(boxes[1], (BoundingBox{4, 5, 7, 8}));
}

TEST(Bench, GroundTruthErrorsNameTheLine) {
  std::istringstream in("1,1,10,20\n1,2,x,4\n");
  try {
    parse_ground_truth(in, "gt.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kFormat);
    EXPECT_NE(std::string(e.what()).find("gt.txt:2"), std::string::npos);
  }
}

TEST(Bench, EchoTrackerScoresPerfectly) {
  auto seq = synthetic::static_target(5, 64, 64, {10, 10, 20, 20}, 0.0, 1);
  seq.truth = {{10, 10, 20, 20}, {12, 10, 20, 20}, {14, 11, 20, 20}, {15, 13, 20, 20}, {17, 15, 20, 20}};
  GroundTruthEchoTracker echo(seq.truth);
  const auto report =
      run_ope("echo", seq.frames.size(), [&](std::size_t i) { return seq.frames[i]; }, seq.truth, echo);
  EXPECT_EQ(report.records.size(), 5u);
  EXPECT_EQ(report.pr, 1.0);
  EXPECT_EQ(report.success.at_half, 1.0);

  StaticBoxTracker still;
  const auto s = run_ope("still", seq.frames.size(), [&](std::size_t i) { return seq.frames[i]; }, seq.truth, still);
  EXPECT_EQ(s.records[0].center_error, 0.0);
  EXPECT_NEAR(s.records[4].center_error, std::hypot(7.0, 5.0), 1e-12);
}

TEST(Bench, OpeRejectsMismatchedInput) {
  StaticBoxTracker t;
  EXPECT_THROW(run_ope("x", 0, [](std::size_t) { return Frame(4, 4); }, {}, t), Error);
  EXPECT_THROW(run_ope("x", 2, [](std::size_t) { return Frame(4, 4); }, {{0, 0, 1, 1}}, t), Error);
}

TEST(Bench, LoadsOtbLayoutAndGroups) {
  const fs::path dir = temp_dir("otb");
  auto seq = synthetic::static_target(3, 48, 48, {8, 8, 16, 16}, 0.0, 2);
  seq.name = "s";
  seq.attributes = {"OCC", "SV"};
  synthetic::write_otb(seq, dir);
  const SequenceSpec spec = load_otb_sequence(dir);
  EXPECT_EQ(spec.frames.size(), 3u);
  EXPECT_EQ(spec.truth[0], seq.truth[0]);
  EXPECT_EQ(spec.attributes, seq.attributes);

  StaticBoxTracker t;
  const std::vector<SequenceReport> reports{run_ope(spec, t)};
  EXPECT_EQ(group_by_attribute(reports, "OCC").sequences, 1);
  EXPECT_TRUE(group_by_attribute(reports, "IV").empty());
  EXPECT_EQ(aggregate(reports).pr, 1.0);

  std::ofstream(dir / "groundtruth_rect.txt") << "1,1,4,4\n";
  try {
    load_otb_sequence(dir);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kFormat);
    EXPECT_NE(std::string(e.what()).find("groundtruth_rect.txt"), std::string::npos);
  }
  fs::remove_all(dir);
}

TEST(Bench, PlotDataFiles) {
  const fs::path dir = temp_dir("plot");
  const auto records = test::random_records(100, 3);
  const auto pr = precision_curve(records);
  const auto sr = success_curve(records);
  emit_plot_data(pr, sr, dir / "seq");
  const std::string p = read_text(dir / "seq_precision.csv");
  const std::string s = read_text(dir / "seq_success.csv");
  EXPECT_EQ(p.rfind("# threshold_px,precision PR(20)=", 0), 0u);
  EXPECT_EQ(std::count(p.begin(), p.end(), '\n'), 52);
  EXPECT_EQ(s.rfind("# overlap_threshold,success AUC=", 0), 0u);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 22);
  try {
    emit_plot_data(pr, sr, dir / "missing" / "seq");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
  fs::remove_all(dir);
}

}  // namespace
}  // namespace wpg
