#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wpg/geometry.hpp"

namespace wpg {

// 8-bit RGB image, row-major, interleaved channels.
class Frame {
 public:
  Frame() = default;
  Frame(int width, int height);
  Frame(int width, int height, std::vector<std::uint8_t> rgb);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0; }

  std::uint8_t at(int x, int y, int c) const { return rgb_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c]; }
  std::uint8_t& at(int x, int y, int c) { return rgb_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c]; }

  void set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b);
  void fill_rect(const PixelRect& rect, std::uint8_t r, std::uint8_t g, std::uint8_t b);

  std::span<const std::uint8_t> data() const { return rgb_; }
  std::span<std::uint8_t> data() { return rgb_; }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> rgb_;
};

inline constexpr double kMinBoxSide = 32.0;

// Ratio applied to a frame/box pair so the box's shorter side becomes
// kMinBoxSide. Boxes already at or below that size keep scale 1.
struct ScalePlan {
  double scale = 1.0;
  double min_side = kMinBoxSide;

  BoundingBox to_working(const BoundingBox& b) const { return {b.lx * scale, b.ly * scale, b.w * scale, b.h * scale}; }
  BoundingBox to_original(const BoundingBox& b) const { return {b.lx / scale, b.ly / scale, b.w / scale, b.h / scale}; }
};

ScalePlan plan_for_box(const BoundingBox& box, double min_side = kMinBoxSide);

struct RescaledFrame {
  Frame frame;
  BoundingBox box;
  ScalePlan plan;
};

// Scales frame and box so min(box.w, box.h) == min_side (bilinear). Throws
// a geometry error when the box does not overlap the frame.
RescaledFrame rescale_for_min_side(const Frame& frame, const BoundingBox& box, double min_side = kMinBoxSide);

// Bilinear resampling to an explicit size.
Frame resize_bilinear(const Frame& frame, int width, int height);

Frame decode_image(const std::filesystem::path& path);
void save_image(const Frame& frame, const std::filesystem::path& path);

// Lexicographically sorted image files of a directory. `pattern` is a glob
// over the file name ('*' and '?'); empty selects any common image extension.
std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& directory,
                                                    const std::string& pattern = {});

// Lazily decoded, ordered frame stream.
class FrameSequence {
 public:
  FrameSequence(const std::filesystem::path& directory, const std::string& pattern = {});

  std::size_t size() const { return files_.size(); }
  Frame frame(std::size_t index) const;
  const std::vector<std::filesystem::path>& files() const { return files_; }

 private:
  std::vector<std::filesystem::path> files_;
};

// Eager variant of FrameSequence: decodes every frame up front.
std::vector<Frame> load_sequence(const std::filesystem::path& directory, const std::string& pattern = {});

}  // namespace wpg
