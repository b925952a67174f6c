#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "skillbench/dataset_io.hpp"
#include "skillbench/image.hpp"
#include "skillbench/model_runtime.hpp"
#include "skillbench/pipeline.hpp"

namespace skillbench::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(SKILLBENCH_FIXTURE_DIR) / name;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() /
            ("skillbench-" + tag + "-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Frame random_frame(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3);
  for (auto& p : px) p = static_cast<std::uint8_t>(byte(rng));
  return Frame(w, h, std::move(px));
}

/// Random frame with a bright rectangle so bright_region detectors fire.
inline Frame frame_with_bright_patch(std::mt19937_64& rng, int w, int h) {
  std::uniform_int_distribution<int> dark(0, 150);
  Frame f(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      f.set(x, y, {static_cast<std::uint8_t>(dark(rng)), static_cast<std::uint8_t>(dark(rng)),
                   static_cast<std::uint8_t>(dark(rng))});
    }
  }
  std::uniform_int_distribution<int> xs(0, w - 2), ys(0, h - 2);
  const int x0 = xs(rng), y0 = ys(rng);
  std::uniform_int_distribution<int> ws(1, w - x0), hs(1, h - y0);
  const int pw = ws(rng), ph = hs(rng);
  for (int y = y0; y < y0 + ph; ++y) {
    for (int x = x0; x < x0 + pw; ++x) f.set(x, y, {250, 250, 250});
  }
  return f;
}

inline BackendSpec mock(std::string mode) {
  BackendSpec s;
  s.kind = BackendKind::mock;
  s.mock.mode = std::move(mode);
  return s;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Red level whose mean_red bin is label `k`.
inline std::uint8_t red_for(std::size_t k) { return static_cast<std::uint8_t>(k * 25 + 12); }

/// Writes `n` PNG frames plus manifest.csv into `dir`. Frame i carries label
/// i % 10 encoded in its red channel, with noise in green and blue only.
inline std::filesystem::path write_synthetic_dataset(const std::filesystem::path& dir, int n,
                                                     bool labeled = true, int w = 64, int h = 48,
                                                     std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> noise(0, 120);
  std::filesystem::create_directories(dir / "frames");
  std::vector<ManifestEntry> entries;
  for (int i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i) % kNumLabels;
    Frame f(w, h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        f.set(x, y, {red_for(k), static_cast<std::uint8_t>(noise(rng)),
                     static_cast<std::uint8_t>(noise(rng))});
      }
    }
    char name[32];
    std::snprintf(name, sizeof name, "frame_%04d", i);
    save_png(f, dir / "frames" / (std::string(name) + ".png"));
    entries.push_back({name, std::filesystem::path("frames") / (std::string(name) + ".png"),
                       labeled ? std::optional(kAllLabels[k]) : std::nullopt,
                       "video_" + std::to_string(i / 5)});
  }
  write_manifest(dir / "manifest.csv", entries);
  return dir / "manifest.csv";
}

}  // namespace skillbench::testing
