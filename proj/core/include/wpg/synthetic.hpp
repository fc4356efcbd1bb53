#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wpg/frames.hpp"
#include "wpg/geometry.hpp"
#include "wpg/patches.hpp"

namespace wpg::synthetic {

// Cluttered background of cool-toned rectangles over noise.
Frame cluttered_background(int width, int height, std::uint64_t seed);

// Warm-toned mosaic with diagonal stripes, defined in box-normalised
// coordinates so it scales with the box.
void paint_target(Frame& frame, const BoundingBox& box, std::uint64_t texture_seed);

void add_noise(Frame& frame, double sigma, std::uint64_t seed);

struct Sequence {
  std::string name;
  std::vector<Frame> frames;
  std::vector<BoundingBox> truth;
  std::vector<std::string> attributes;
};

struct LinearMotionOptions {
  int frames = 100;
  int width = 400;
  int height = 330;
  double target_side = 60.0;
  double start_x = 30.0;
  double start_y = 40.0;
  double vx = 2.4;  // |v| = 3 px/frame
  double vy = 1.8;
  int occlusion_start = 50;  // first occluded frame, -1 for none
  int occlusion_frames = 10;
  double occluded_fraction = 0.4;  // left part of the target hidden
  double noise_sigma = 3.0;
  std::uint64_t seed = 7;
};

Sequence linear_motion(const LinearMotionOptions& opt = {});

struct ZoomOptions {
  int frames = 60;
  int width = 320;
  int height = 320;
  double start_side = 50.0;
  double end_side = 100.0;  // size doubles over the sequence
  double noise_sigma = 3.0;
  std::uint64_t seed = 11;
};

Sequence zoom(const ZoomOptions& opt = {});

// Target that never moves; frames identical apart from optional noise.
Sequence static_target(int frames, int width, int height, const BoundingBox& box, double noise_sigma,
                       std::uint64_t seed);

// OTB layout: <dir>/img/0001.png..., <dir>/groundtruth_rect.txt with 1-based
// x,y,w,h, optional <dir>/attributes.txt.
void write_otb(const Sequence& seq, const std::filesystem::path& dir);

// Feature matrix with two well-separated clusters. Foreground seeds and a
// random half of the undetermined nodes come from one cluster, ring seeds and
// the rest from the other.
struct TwoClusterInstance {
  Eigen::MatrixXd x;
  SeedAssignment seeds;
  std::vector<bool> foreground;  // cluster membership per node
};

TwoClusterInstance two_cluster(std::uint64_t seed, double noise_sigma = 0.05);

// Patch features of a random textured scene, shaped like production input.
PatchFeatures random_scene_features(std::uint64_t seed);

}  // namespace wpg::synthetic
