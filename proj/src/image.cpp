#include "skillbench/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "skillbench/error.hpp"

namespace skillbench {

namespace {

std::size_t pixel_count(int width, int height) {
  if (width < 1 || height < 1) {
    throw Error(ErrorCode::argument, "raster dimensions must be positive, got " +
                                         std::to_string(width) + "x" + std::to_string(height));
  }
  return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

std::uint8_t round_to_byte(double v) noexcept {
  return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

constexpr ColorLut kInferno = {{
#include "colormap_lut.inc"
}};

}  // namespace

Frame::Frame(int width, int height, Rgb fill)
    : width_(width), height_(height), pixels_(pixel_count(width, height) * 3) {
  for (std::size_t i = 0; i < pixels_.size(); i += 3) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
  }
}

Frame::Frame(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  const std::size_t expected = pixel_count(width, height) * 3;
  if (pixels_.size() != expected) {
    throw Error(ErrorCode::argument, "pixel buffer holds " + std::to_string(pixels_.size()) +
                                         " bytes, expected " + std::to_string(expected));
  }
}

std::string to_string(const PatchRegion& region) {
  std::ostringstream os;
  os << "(" << region.x0 << "," << region.y0 << "," << region.x1 << "," << region.y1 << ")";
  return os.str();
}

void check_region(const PatchRegion& region, int frame_w, int frame_h) {
  auto fail = [&](const char* what) {
    throw Error(ErrorCode::bounds, std::string(what) + " for region " + to_string(region) +
                                       " in " + std::to_string(frame_w) + "x" +
                                       std::to_string(frame_h) + " frame");
  };
  if (region.x0 >= region.x1) fail("empty region: x0 >= x1");
  if (region.y0 >= region.y1) fail("empty region: y0 >= y1");
  if (region.x0 < 0) fail("x0 < 0");
  if (region.y0 < 0) fail("y0 < 0");
  if (region.x1 > frame_w) fail("x1 exceeds frame width");
  if (region.y1 > frame_h) fail("y1 exceeds frame height");
}

DepthMap::DepthMap(int width, int height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
  const std::size_t expected = pixel_count(width, height);
  if (values_.size() != expected) {
    throw Error(ErrorCode::argument, "depth buffer holds " + std::to_string(values_.size()) +
                                         " values, expected " + std::to_string(expected));
  }
}

Frame crop(const Frame& frame, const PatchRegion& region) {
  check_region(region, frame.width(), frame.height());
  std::vector<std::uint8_t> out(static_cast<std::size_t>(region.area()) * 3);
  const auto src = frame.pixels();
  const std::size_t row_bytes = static_cast<std::size_t>(region.width()) * 3;
  for (int y = 0; y < region.height(); ++y) {
    const std::size_t from = (static_cast<std::size_t>(region.y0 + y) *
                                  static_cast<std::size_t>(frame.width()) +
                              static_cast<std::size_t>(region.x0)) * 3;
    std::copy_n(src.begin() + static_cast<std::ptrdiff_t>(from), row_bytes,
                out.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(y) * row_bytes));
  }
  return Frame(region.width(), region.height(), std::move(out));
}

Frame resize_bilinear(const Frame& frame, int target_w, int target_h) {
  if (target_w < 1 || target_h < 1) {
    throw Error(ErrorCode::argument, "resize target must be at least 1x1, got " +
                                         std::to_string(target_w) + "x" +
                                         std::to_string(target_h));
  }
  struct Tap {
    int lo;
    int hi;
    double frac;
  };
  auto taps = [](int src, int dst) {
    std::vector<Tap> t(static_cast<std::size_t>(dst));
    const double scale = static_cast<double>(src) / static_cast<double>(dst);
    for (int i = 0; i < dst; ++i) {
      double s = (static_cast<double>(i) + 0.5) * scale - 0.5;
      s = std::clamp(s, 0.0, static_cast<double>(src - 1));
      const int lo = static_cast<int>(std::floor(s));
      t[static_cast<std::size_t>(i)] = {lo, std::min(lo + 1, src - 1), s - lo};
    }
    return t;
  };
  const auto xs = taps(frame.width(), target_w);
  const auto ys = taps(frame.height(), target_h);
  const auto src = frame.pixels();
  const std::size_t stride = static_cast<std::size_t>(frame.width()) * 3;

  std::vector<std::uint8_t> out(static_cast<std::size_t>(target_w) *
                                static_cast<std::size_t>(target_h) * 3);
  std::size_t o = 0;
  for (const Tap& ty : ys) {
    const std::size_t row_lo = static_cast<std::size_t>(ty.lo) * stride;
    const std::size_t row_hi = static_cast<std::size_t>(ty.hi) * stride;
    for (const Tap& tx : xs) {
      const std::size_t c_lo = static_cast<std::size_t>(tx.lo) * 3;
      const std::size_t c_hi = static_cast<std::size_t>(tx.hi) * 3;
      for (std::size_t c = 0; c < 3; ++c) {
        const double top = (1.0 - tx.frac) * src[row_lo + c_lo + c] + tx.frac * src[row_lo + c_hi + c];
        const double bottom =
            (1.0 - tx.frac) * src[row_hi + c_lo + c] + tx.frac * src[row_hi + c_hi + c];
        out[o++] = round_to_byte((1.0 - ty.frac) * top + ty.frac * bottom);
      }
    }
  }
  return Frame(target_w, target_h, std::move(out));
}

const ColorLut& colormap_lut() noexcept { return kInferno; }

ColorLut load_colormap_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open colormap " + path.string());
  ColorLut lut{};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (n == lut.size()) throw Error(ErrorCode::parse, path.string() + ": more than 256 rows");
    int r = -1, g = -1, b = -1;
    char c1 = 0, c2 = 0;
    std::istringstream row(line);
    if (!(row >> r >> c1 >> g >> c2 >> b) || c1 != ',' || c2 != ',' || r < 0 || r > 255 ||
        g < 0 || g > 255 || b < 0 || b > 255) {
      throw Error(ErrorCode::parse, path.string() + ":" + std::to_string(n + 1) +
                                        ": expected r,g,b in 0..255");
    }
    lut[n++] = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                static_cast<std::uint8_t>(b)};
  }
  if (n != lut.size()) {
    throw Error(ErrorCode::parse, path.string() + ": expected 256 rows, found " + std::to_string(n));
  }
  return lut;
}

std::uint8_t colormap_index(double value, double min, double max) noexcept {
  const double range = max - min;
  if (!(range > 0.0)) return 0;
  return round_to_byte((value - min) / range * 255.0);
}

Frame apply_colormap(const DepthMap& depth) {
  const auto values = depth.values();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo;
  const double max = *hi;
  const ColorLut& lut = colormap_lut();
  std::vector<std::uint8_t> out(values.size() * 3);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Rgb c = lut[colormap_index(values[i], min, max)];
    out[i * 3] = c.r;
    out[i * 3 + 1] = c.g;
    out[i * 3 + 2] = c.b;
  }
  return Frame(depth.width(), depth.height(), std::move(out));
}

}  // namespace skillbench
