#include "wpg/frames.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "wpg/error.hpp"

namespace wpg {

namespace fs = std::filesystem;

Frame::Frame(int width, int height)
    : Frame(width, height,
            std::vector<std::uint8_t>(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0) * 3, 0)) {}

Frame::Frame(int width, int height, std::vector<std::uint8_t> rgb) : width_(width), height_(height), rgb_(std::move(rgb)) {
  if (width < 1 || height < 1) throw Error(ErrorKind::kInput, "frame dimensions must be positive");
  if (rgb_.size() != static_cast<std::size_t>(width) * height * 3) {
    throw Error(ErrorKind::kInput, "pixel buffer size does not match frame dimensions");
  }
}

void Frame::set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
  at(x, y, 0) = r;
  at(x, y, 1) = g;
  at(x, y, 2) = b;
}

void Frame::fill_rect(const PixelRect& rect, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  const int x0 = std::max(rect.x, 0), x1 = std::min(rect.x + rect.w, width_);
  const int y0 = std::max(rect.y, 0), y1 = std::min(rect.y + rect.h, height_);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x < x1; ++x) set_pixel(x, y, r, g, b);
}

namespace {

cv::Mat as_mat(const Frame& frame) {
  // OpenCV only reads from this header; the const_cast never leads to a write.
  return cv::Mat(frame.height(), frame.width(), CV_8UC3, const_cast<std::uint8_t*>(frame.data().data()));
}

Frame from_mat(const cv::Mat& rgb) {
  cv::Mat contiguous = rgb.isContinuous() ? rgb : rgb.clone();
  std::vector<std::uint8_t> buf(contiguous.data, contiguous.data + contiguous.total() * 3);
  return Frame(contiguous.cols, contiguous.rows, std::move(buf));
}

}  // namespace

ScalePlan plan_for_box(const BoundingBox& box, double min_side) {
  ScalePlan plan;
  plan.min_side = min_side;
  const double shortest = std::min(box.w, box.h);
  // Tolerance keeps the rule idempotent under floating-point round trips.
  if (shortest > min_side * (1.0 + 1e-9)) plan.scale = min_side / shortest;
  return plan;
}

Frame resize_bilinear(const Frame& frame, int width, int height) {
  if (width == frame.width() && height == frame.height()) return frame;
  cv::Mat out;
  cv::resize(as_mat(frame), out, cv::Size(width, height), 0, 0, cv::INTER_LINEAR);
  return from_mat(out);
}

RescaledFrame rescale_for_min_side(const Frame& frame, const BoundingBox& box, double min_side) {
  if (!box.valid()) throw Error(ErrorKind::kGeometry, "box must have positive width and height");
  const BoundingBox full{0.0, 0.0, static_cast<double>(frame.width()), static_cast<double>(frame.height())};
  if (intersection_area(box, full) <= 0.0) throw Error(ErrorKind::kGeometry, "box lies outside the frame");

  RescaledFrame out;
  out.plan = plan_for_box(box, min_side);
  if (out.plan.scale == 1.0) {
    out.frame = frame;
    out.box = box;
    return out;
  }
  const int w = std::max(1, static_cast<int>(std::lround(frame.width() * out.plan.scale)));
  const int h = std::max(1, static_cast<int>(std::lround(frame.height() * out.plan.scale)));
  out.frame = resize_bilinear(frame, w, h);
  out.box = out.plan.to_working(box);
  return out;
}

Frame decode_image(const fs::path& path) {
  cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw Error(ErrorKind::kDecode, "cannot decode image '" + path.string() + "'");
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  return from_mat(rgb);
}

void save_image(const Frame& frame, const fs::path& path) {
  cv::Mat bgr;
  cv::cvtColor(as_mat(frame), bgr, cv::COLOR_RGB2BGR);
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), bgr);
  } catch (const cv::Exception&) {
    ok = false;
  }
  if (!ok) throw Error(ErrorKind::kIo, "cannot write image '" + path.string() + "'");
}

namespace {

std::regex glob_to_regex(const std::string& glob) {
  std::string re;
  for (char c : glob) {
    switch (c) {
      case '*': re += ".*"; break;
      case '?': re += '.'; break;
      case '.': case '(': case ')': case '[': case ']': case '{': case '}':
      case '+': case '^': case '$': case '|': case '\\':
        re += '\\';
        re += c;
        break;
      default: re += c;
    }
  }
  return std::regex(re);
}

bool has_image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  static const char* kExts[] = {".jpg", ".jpeg", ".png", ".bmp", ".ppm", ".pgm", ".pnm", ".tif", ".tiff", ".webp"};
  return std::any_of(std::begin(kExts), std::end(kExts), [&](const char* e) { return ext == e; });
}

}  // namespace

std::vector<fs::path> list_frame_files(const fs::path& directory, const std::string& pattern) {
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) {
    throw Error(ErrorKind::kInput, "sequence directory '" + directory.string() + "' does not exist");
  }
  std::vector<fs::path> files;
  const bool use_glob = !pattern.empty();
  const std::regex re = use_glob ? glob_to_regex(pattern) : std::regex();
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    const auto name = entry.path().filename().string();
    if (use_glob ? std::regex_match(name, re) : has_image_extension(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });
  return files;
}

FrameSequence::FrameSequence(const fs::path& directory, const std::string& pattern)
    : files_(list_frame_files(directory, pattern)) {
  if (files_.empty()) throw Error(ErrorKind::kEmptySequence, "no frames in '" + directory.string() + "'");
}

Frame FrameSequence::frame(std::size_t index) const {
  if (index >= files_.size()) throw Error(ErrorKind::kInput, "frame index out of range");
  return decode_image(files_[index]);
}

std::vector<Frame> load_sequence(const fs::path& directory, const std::string& pattern) {
  FrameSequence seq(directory, pattern);
  std::vector<Frame> frames;
  frames.reserve(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) frames.push_back(seq.frame(i));
  return frames;
}

}  // namespace wpg
