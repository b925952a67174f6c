#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "skillbench/error.hpp"
#include "skillbench/image.hpp"
#include "skillbench/labels.hpp"
#include "skillbench/model_runtime.hpp"
#include "skillbench/selection.hpp"

namespace skillbench {

enum class ApproachId { full_rgb, full_depth, rgb_patch, depth_patch };

inline constexpr std::array<ApproachId, 4> kAllApproaches = {
    ApproachId::full_rgb, ApproachId::full_depth, ApproachId::rgb_patch, ApproachId::depth_patch};

/// "full-rgb", "full-depth", "rgb-patch", "depth-patch".
const char* to_string(ApproachId approach) noexcept;
/// Accepts the hyphenated names and their underscore spellings.
std::optional<ApproachId> parse_approach(std::string_view name) noexcept;

bool needs_detector(ApproachId approach) noexcept;
bool needs_depth(ApproachId approach) noexcept;

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct FrameResult {
  std::string frame_id;
  ApproachId approach = ApproachId::full_rgb;
  SkillLabel predicted = SkillLabel::NONE;
  ClassScores scores = ClassScores::peaked(SkillLabel::NONE);
  std::optional<SelectionOutcome> selection;  // patch approaches only
  std::vector<StageTiming> stage_timings;

  double total_seconds() const noexcept;
};

/// Thrown by run_frame; carries the name of the stage that failed.
class StageError : public Error {
 public:
  StageError(ErrorCode code, std::string stage, std::string message)
      : Error(code, "stage '" + stage + "': " + message),
        stage_(std::move(stage)),
        detail_(std::move(message)) {}

  const std::string& stage() const noexcept { return stage_; }
  /// The message without the stage prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::string stage_;
  std::string detail_;
};

/// Non-owning view of the backends one worker uses.
struct Backends {
  DetectorBackend* detector = nullptr;
  DepthBackend* depth = nullptr;
  ClassifierBackend* classifier = nullptr;
};

struct BackendSet {
  std::unique_ptr<DetectorBackend> detector;
  std::unique_ptr<DepthBackend> depth;
  std::unique_ptr<ClassifierBackend> classifier;

  Backends view() const noexcept { return {detector.get(), depth.get(), classifier.get()}; }
};

struct BackendSpecs {
  std::optional<BackendSpec> detector;
  std::optional<BackendSpec> depth;
  std::optional<BackendSpec> classifier;

  bool operator==(const BackendSpecs&) const = default;
};

/// Loads the roles `approach` needs. The detector is wrapped with
/// filter_detections() at the configured confidence threshold.
BackendSet load_backends(const BackendSpecs& specs, ApproachId approach,
                         const SelectionConfig& cfg);

/// Runs one approach end to end:
///   full-rgb     resize -> classify
///   full-depth   depth -> render -> resize -> classify
///   rgb-patch    detect -> select -> crop -> resize -> classify
///   depth-patch  detect -> select -> crop -> depth -> render -> resize -> classify
/// Depth for depth-patch is estimated on the cropped patch.
FrameResult run_frame(std::string frame_id, const Frame& frame, ApproachId approach,
                      const Backends& backends, const SelectionConfig& cfg);

struct BatchItem {
  std::string frame_id;
  std::function<Frame()> load;
};

struct FrameError {
  std::string frame_id;
  std::string stage;
  ErrorCode code = ErrorCode::internal;
  std::string message;
};

using BatchEntry = std::variant<FrameResult, FrameError>;
using BackendFactory = std::function<BackendSet()>;

struct BatchOptions {
  int workers = 1;
  bool fail_fast = false;
};

/// Processes every item, `workers` at a time, each worker holding its own
/// backend set from `factory`. Entries come back in input order. Per-frame
/// failures become FrameError entries unless fail_fast is set, in which case
/// the first failure is rethrown once the workers stop.
std::vector<BatchEntry> run_batch(std::span<const BatchItem> items, ApproachId approach,
                                  const BackendFactory& factory, const SelectionConfig& cfg,
                                  const BatchOptions& options);

}  // namespace skillbench
