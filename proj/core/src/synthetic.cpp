#include "wpg/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "wpg/error.hpp"

namespace wpg::synthetic {

namespace fs = std::filesystem;

namespace {

using Rgb = std::array<std::uint8_t, 3>;

std::uint8_t clamp_u8(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

Rgb cool_color(std::mt19937_64& rng) {
  static constexpr Rgb kPalette[] = {{30, 60, 140}, {40, 120, 70}, {90, 110, 120}, {20, 90, 110},
                                     {70, 140, 160}, {60, 80, 60}, {120, 130, 150}, {35, 45, 80}};
  return kPalette[rng() % std::size(kPalette)];
}

Rgb warm_color(std::uint64_t h) {
  static constexpr Rgb kPalette[] = {{220, 40, 30}, {240, 140, 20}, {250, 220, 60},
                                     {180, 30, 90}, {200, 90, 40},  {255, 180, 120}};
  return kPalette[h % std::size(kPalette)];
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Frame cluttered_background(int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Frame f(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) f.set_pixel(x, y, 70, 90, 100);
  std::uniform_int_distribution<int> side(6, 40);
  std::uniform_int_distribution<int> px(-20, width), py(-20, height);
  const int blocks = width * height / 120;
  for (int k = 0; k < blocks; ++k) {
    const Rgb c = cool_color(rng);
    f.fill_rect({px(rng), py(rng), side(rng), side(rng)}, c[0], c[1], c[2]);
  }
  return f;
}

void paint_target(Frame& frame, const BoundingBox& box, std::uint64_t texture_seed) {
  constexpr int kCells = 6;
  const int x0 = std::max(0, static_cast<int>(std::floor(box.lx)));
  const int y0 = std::max(0, static_cast<int>(std::floor(box.ly)));
  const int x1 = std::min(frame.width(), static_cast<int>(std::ceil(box.lx + box.w)));
  const int y1 = std::min(frame.height(), static_cast<int>(std::ceil(box.ly + box.h)));
  for (int y = y0; y < y1; ++y) {
    const double v = (y + 0.5 - box.ly) / box.h;
    if (v < 0.0 || v >= 1.0) continue;
    for (int x = x0; x < x1; ++x) {
      const double u = (x + 0.5 - box.lx) / box.w;
      if (u < 0.0 || u >= 1.0) continue;
      const int cu = static_cast<int>(u * kCells), cv = static_cast<int>(v * kCells);
      Rgb c = warm_color(mix(texture_seed * 131 + cv * kCells + cu));
      const double stripe = std::fmod((u + v) * 5.0, 1.0);
      const double shade = stripe < 0.3 ? 0.55 : 1.0;
      frame.set_pixel(x, y, clamp_u8(c[0] * shade), clamp_u8(c[1] * shade), clamp_u8(c[2] * shade));
    }
  }
}

void add_noise(Frame& frame, double sigma, std::uint64_t seed) {
  if (sigma <= 0.0) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  for (auto& v : frame.data()) v = clamp_u8(v + n(rng));
}

Sequence linear_motion(const LinearMotionOptions& opt) {
  Sequence seq;
  seq.name = "synthetic_linear";
  seq.attributes = {"BC", "OCC"};
  const Frame background = cluttered_background(opt.width, opt.height, opt.seed);
  for (int t = 0; t < opt.frames; ++t) {
    const BoundingBox box{opt.start_x + opt.vx * t, opt.start_y + opt.vy * t, opt.target_side, opt.target_side};
    Frame f = background;
    paint_target(f, box, opt.seed);
    if (opt.occlusion_start >= 0 && t >= opt.occlusion_start && t < opt.occlusion_start + opt.occlusion_frames) {
      const int w = static_cast<int>(std::lround(box.w * opt.occluded_fraction));
      f.fill_rect({static_cast<int>(std::lround(box.lx)) - 4, static_cast<int>(std::lround(box.ly)) - 4, w + 4,
                   static_cast<int>(std::lround(box.h)) + 8},
                  110, 110, 110);
    }
    add_noise(f, opt.noise_sigma, opt.seed * 1000 + t);
    seq.frames.push_back(std::move(f));
    seq.truth.push_back(box);
  }
  return seq;
}

Sequence zoom(const ZoomOptions& opt) {
  Sequence seq;
  seq.name = "synthetic_zoom";
  seq.attributes = {"SV"};
  const Frame background = cluttered_background(opt.width, opt.height, opt.seed);
  const double cx = opt.width / 2.0, cy = opt.height / 2.0;
  for (int t = 0; t < opt.frames; ++t) {
    const double frac = opt.frames > 1 ? static_cast<double>(t) / (opt.frames - 1) : 0.0;
    const double side = opt.start_side * std::pow(opt.end_side / opt.start_side, frac);
    const BoundingBox box = BoundingBox::centered(cx, cy, side, side);
    Frame f = background;
    paint_target(f, box, opt.seed);
    add_noise(f, opt.noise_sigma, opt.seed * 1000 + t);
    seq.frames.push_back(std::move(f));
    seq.truth.push_back(box);
  }
  return seq;
}

Sequence static_target(int frames, int width, int height, const BoundingBox& box, double noise_sigma,
                       std::uint64_t seed) {
  Sequence seq;
  seq.name = "synthetic_static";
  Frame base = cluttered_background(width, height, seed);
  paint_target(base, box, seed);
  for (int t = 0; t < frames; ++t) {
    Frame f = base;
    add_noise(f, noise_sigma, seed * 1000 + t);
    seq.frames.push_back(std::move(f));
    seq.truth.push_back(box);
  }
  return seq;
}

void write_otb(const Sequence& seq, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir / "img", ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create '" + (dir / "img").string() + "'");
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    std::ostringstream name;
    name << std::setw(4) << std::setfill('0') << (i + 1) << ".png";
    save_image(seq.frames[i], dir / "img" / name.str());
  }
  std::ofstream gt(dir / "groundtruth_rect.txt");
  if (!gt) throw Error(ErrorKind::kIo, "cannot write ground truth in '" + dir.string() + "'");
  gt << std::setprecision(10);
  for (const auto& b : seq.truth) gt << b.lx + 1.0 << ',' << b.ly + 1.0 << ',' << b.w << ',' << b.h << '\n';
  if (!seq.attributes.empty()) {
    std::ofstream attr(dir / "attributes.txt");
    for (std::size_t i = 0; i < seq.attributes.size(); ++i) attr << (i ? "," : "") << seq.attributes[i];
    attr << '\n';
  }
}

TwoClusterInstance two_cluster(std::uint64_t seed, double noise_sigma) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, noise_sigma);

  Eigen::VectorXd v1(kDescriptorDim), v2(kDescriptorDim);
  for (int k = 0; k < kDescriptorDim; ++k) {
    v1[k] = unit(rng);
    v2[k] = unit(rng);
  }

  TwoClusterInstance inst;
  BoundingBox box{0, 0, 80, 80};
  inst.seeds = init_seeds(partition(box));
  inst.foreground.assign(kNodeCount, false);
  inst.x.resize(kDescriptorDim, kNodeCount);
  for (int i = 0; i < kNodeCount; ++i) {
    bool fg;
    if (inst.seeds.gamma[i] == 1.0) fg = inst.seeds.r[i] == 1.0;
    else fg = unit(rng) < 0.5;
    inst.foreground[i] = fg;
    const Eigen::VectorXd& centre = fg ? v1 : v2;
    for (int k = 0; k < kDescriptorDim; ++k) inst.x(k, i) = centre[k] + noise(rng);
  }
  // Guarantee both clusters among the undetermined nodes.
  bool has_fg = false, has_bg = false;
  int first_free = -1;
  for (int i = 0; i < kNodeCount; ++i) {
    if (inst.seeds.gamma[i] != 0.0) continue;
    if (first_free < 0) first_free = i;
    (inst.foreground[i] ? has_fg : has_bg) = true;
  }
  if (!(has_fg && has_bg) && first_free >= 0) {
    const bool fg = !inst.foreground[first_free];
    inst.foreground[first_free] = fg;
    const Eigen::VectorXd& centre = fg ? v1 : v2;
    for (int k = 0; k < kDescriptorDim; ++k) inst.x(k, first_free) = centre[k] + noise(rng);
  }
  return inst;
}

PatchFeatures random_scene_features(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> side(40.0, 120.0);
  const double w = side(rng), h = side(rng);
  const int fw = static_cast<int>(w * 2 + 60), fh = static_cast<int>(h * 2 + 60);
  std::uniform_real_distribution<double> ox(10.0, fw - w - 10.0), oy(10.0, fh - h - 10.0);
  const BoundingBox box{ox(rng), oy(rng), w, h};
  Frame f = cluttered_background(fw, fh, seed);
  paint_target(f, box, seed + 1);
  add_noise(f, 4.0, seed + 2);
  return feature_matrix(f, box);
}

}  // namespace wpg::synthetic
