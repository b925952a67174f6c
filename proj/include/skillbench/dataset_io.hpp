#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "skillbench/image.hpp"
#include "skillbench/labels.hpp"
#include "skillbench/metrics.hpp"
#include "skillbench/pipeline.hpp"

namespace skillbench {

inline constexpr std::string_view kManifestHeader = "frame_id,path,label,video_id";

struct ManifestEntry {
  std::string frame_id;
  std::filesystem::path path;  // as written; see resolve_frame_path()
  std::optional<SkillLabel> label;
  std::string video_id;

  bool operator==(const ManifestEntry&) const = default;
};

/// Reads a manifest CSV. Errors name the offending line.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const std::vector<ManifestEntry>& entries);

/// Relative frame paths are taken relative to the manifest's directory.
std::filesystem::path resolve_frame_path(const std::filesystem::path& manifest,
                                         const ManifestEntry& entry);

/// Decodes PNG or JPEG into an RGB frame.
Frame load_frame(const std::filesystem::path& path);
void save_png(const Frame& frame, const std::filesystem::path& path);

/// RFC 4180 quoting for a single field.
std::string csv_field(std::string_view value);

struct SelectionStats {
  std::size_t patch_frames = 0;
  std::size_t fallback_count = 0;
  std::size_t total_frames = 0;

  double fallback_fraction() const noexcept {
    return total_frames ? static_cast<double>(fallback_count) / static_cast<double>(total_frames)
                        : 0.0;
  }
};

struct RunReport {
  nlohmann::json config = nlohmann::json::object();
  std::vector<FrameResult> results;
  std::vector<std::optional<SkillLabel>> truths;  // parallel to results; may be empty
  std::vector<FrameError> errors;
  std::optional<ConfusionMatrix> confusion;
  std::vector<BenchRecord> bench;

  SelectionStats selection_stats() const noexcept;
};

/// Writes results.csv. Stage timings are not part of the file so repeated
/// runs produce identical bytes.
std::filesystem::path write_results_csv(const RunReport& report, const std::filesystem::path& dir);
/// Writes errors.csv; only called when there are errors.
std::filesystem::path write_errors_csv(const RunReport& report, const std::filesystem::path& dir);

/// results.csv, confusion.csv, bench.csv and summary.json, plus errors.csv
/// when any frame failed. Output is a pure function of the report.
std::vector<std::filesystem::path> write_report(const RunReport& report,
                                                const std::filesystem::path& dir);

}  // namespace skillbench
