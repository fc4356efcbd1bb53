#include <benchmark/benchmark.h>

#include "wpg/descriptor.hpp"
#include "wpg/graphlearn.hpp"
#include "wpg/patches.hpp"
#include "wpg/synthetic.hpp"
#include "wpg/tracker.hpp"

namespace {

using namespace wpg;

void BM_GraphSolve(benchmark::State& state) {
  const PatchFeatures pf = synthetic::random_scene_features(1);
  const SeedAssignment seeds = init_seeds(pf.layout);
  GraphSolverParams p;
  p.max_iter = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve(pf.x, seeds, p).w);
}
BENCHMARK(BM_GraphSolve)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_FrameFeatures(benchmark::State& state) {
  const Frame f = synthetic::cluttered_background(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(FrameFeatures(f).width());
}
BENCHMARK(BM_FrameFeatures)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);

void BM_WeightedDescriptor(benchmark::State& state) {
  const Frame f = synthetic::cluttered_background(200, 200, 4);
  const FrameFeatures feat(f);
  const InteriorWeights w = InteriorWeights::Constant(0.7);
  for (auto _ : state) benchmark::DoNotOptimize(describe_box(feat, {60, 60, 40, 40}, w).data());
}
BENCHMARK(BM_WeightedDescriptor)->Unit(benchmark::kMicrosecond);

void BM_TrackFrame(benchmark::State& state) {
  synthetic::LinearMotionOptions opt;
  opt.frames = 4;
  opt.occlusion_start = -1;
  const auto seq = synthetic::linear_motion(opt);
  WpgTracker tracker;
  tracker.initialize(seq.frames[0], seq.truth[0]);
  std::size_t k = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tracker.track(seq.frames[k]).box);
    k = k % 3 + 1;
  }
}
BENCHMARK(BM_TrackFrame)->Unit(benchmark::kMillisecond)->Iterations(6);

}  // namespace

BENCHMARK_MAIN();
