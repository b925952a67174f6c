#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace skillbench {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

/// 8-bit RGB raster, row-major, three interleaved channels per pixel.
/// This is the only raster format inside the library; decoders convert
/// into it at the boundary.
class Frame {
 public:
  Frame(int width, int height, Rgb fill = {});
  Frame(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }

  Rgb at(int x, int y) const noexcept {
    const std::uint8_t* p = &pixels_[offset(x, y)];
    return {p[0], p[1], p[2]};
  }
  void set(int x, int y, Rgb value) noexcept {
    std::uint8_t* p = &pixels_[offset(x, y)];
    p[0] = value.r;
    p[1] = value.g;
    p[2] = value.b;
  }

  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
  std::span<std::uint8_t> pixels() noexcept { return pixels_; }

  bool operator==(const Frame&) const = default;

 private:
  std::size_t offset(int x, int y) const noexcept {
    return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
            static_cast<std::size_t>(x)) * 3;
  }

  int width_;
  int height_;
  std::vector<std::uint8_t> pixels_;
};

/// Pixel rectangle; x0/y0 inclusive, x1/y1 exclusive.
struct PatchRegion {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  int width() const noexcept { return x1 - x0; }
  int height() const noexcept { return y1 - y0; }
  long long area() const noexcept {
    return static_cast<long long>(width()) * static_cast<long long>(height());
  }
  bool contains(const PatchRegion& other) const noexcept {
    return x0 <= other.x0 && y0 <= other.y0 && other.x1 <= x1 && other.y1 <= y1;
  }

  bool operator==(const PatchRegion&) const = default;
};

std::string to_string(const PatchRegion& region);

/// Throws Error(bounds) naming the first offending coordinate when `region`
/// is empty or leaves a `frame_w` x `frame_h` frame.
void check_region(const PatchRegion& region, int frame_w, int frame_h);

/// Relative depth per pixel, row-major. Larger values are closer.
class DepthMap {
 public:
  DepthMap(int width, int height, std::vector<double> values);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double at(int x, int y) const noexcept {
    return values_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                   static_cast<std::size_t>(x)];
  }
  std::span<const double> values() const noexcept { return values_; }

  bool operator==(const DepthMap&) const = default;

 private:
  int width_;
  int height_;
  std::vector<double> values_;
};

Frame crop(const Frame& frame, const PatchRegion& region);

/// Bilinear resampling with pixel centres at (i + 0.5) / N, edge samples
/// clamped, each channel interpolated independently and rounded half-up.
Frame resize_bilinear(const Frame& frame, int target_w, int target_h);

using ColorLut = std::array<Rgb, 256>;

/// The built-in colormap: "inferno" quantised to 8 bits. Dark to bright;
/// relative luminance strictly increases with the index. The same table is
/// shipped as data/colormap_inferno.csv.
const ColorLut& colormap_lut() noexcept;

/// Parses a 256-line "r,g,b" CSV table.
ColorLut load_colormap_csv(const std::filesystem::path& path);

/// Index of `value` after min-max normalisation to 0..255, rounded half-up.
/// A zero range maps everything to 0.
std::uint8_t colormap_index(double value, double min, double max) noexcept;

/// Min-max normalises the depth values and maps them through colormap_lut().
Frame apply_colormap(const DepthMap& depth);

}  // namespace skillbench
