#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "skillbench/image.hpp"
#include "skillbench/labels.hpp"
#include "skillbench/selection.hpp"

namespace skillbench {

// Behavioural contracts for the three external networks. A handle is used
// by one worker at a time; handles may move between threads.

class DetectorBackend {
 public:
  virtual ~DetectorBackend() = default;
  /// Boxes in the pixel coordinates of `frame`, confidences in [0,1].
  virtual std::vector<Detection> detect(const Frame& frame) = 0;
};

class DepthBackend {
 public:
  virtual ~DepthBackend() = default;
  /// Relative depth with the dimensions of `frame`.
  virtual DepthMap estimate(const Frame& frame) = 0;
};

class ClassifierBackend {
 public:
  virtual ~ClassifierBackend() = default;
  /// Expects a 224x224 frame.
  virtual ClassScores classify(const Frame& frame) = 0;
};

enum class BackendRole { detector, depth, classifier };
enum class BackendKind { graph_file, mock };

const char* to_string(BackendRole role) noexcept;

inline constexpr int kClassifierInputSize = 224;
inline constexpr int kDetectorInputSize = 640;

/// Deterministic stand-in configuration. Which fields matter depends on
/// the role and `mode`:
///
///   detector:   "none"          no detections
///               "fixed"         `boxes` verbatim on every frame
///               "bright_region" bounding box of pixels whose luma is at
///                               least `luma_threshold`, at `confidence`
///   depth:      "luminance"     depth = Rec.601 luma of each pixel
///               "constant"      depth = 1 everywhere
///   classifier: "constant"      ClassScores::peaked(`label`, `peak`)
///               "mean_red"      label index = floor(mean red * 10 / 256);
///                               pairs with synthetic frames whose red
///                               channel encodes the truth
///               "content_hash"  softmax of logits seeded by a hash of the
///                               pixels; sensitive to every input byte
struct MockParams {
  std::string mode;
  std::vector<Detection> boxes;
  int luma_threshold = 200;
  double confidence = 0.9;
  SkillLabel label = SkillLabel::NONE;
  double peak = 0.91;
  double load_delay_s = 0.0;
  double infer_delay_s = 0.0;

  bool operator==(const MockParams&) const = default;
};

struct BackendSpec {
  BackendKind kind = BackendKind::mock;
  std::filesystem::path path;  // graph_file only
  MockParams mock;             // mock only

  bool operator==(const BackendSpec&) const = default;
};

/// Loaded handle for any role.
struct BackendHandle {
  BackendRole role;
  std::unique_ptr<DetectorBackend> detector;
  std::unique_ptr<DepthBackend> depth;
  std::unique_ptr<ClassifierBackend> classifier;
};

/// Loads `spec` for `role`. Graph files are read through the embedded ONNX
/// runtime and their tensor shapes checked against the role; the sidecar
/// metadata is read from the same path with a .json extension. Mock specs
/// with non-zero delays come back wrapped by mock_latency_wrap().
BackendHandle load_backend(const BackendSpec& spec, BackendRole role);

std::unique_ptr<DetectorBackend> load_detector(const BackendSpec& spec);
std::unique_ptr<DepthBackend> load_depth(const BackendSpec& spec);
std::unique_ptr<ClassifierBackend> load_classifier(const BackendSpec& spec);

/// Drops detections below `conf_threshold` and boxes without positive area
/// inside the frame, after the wrapped backend has decoded them.
std::unique_ptr<DetectorBackend> filter_detections(std::unique_ptr<DetectorBackend> inner,
                                                   double conf_threshold);

/// Sleeps `load_delay_s` once, now, and `infer_delay_s` before every call
/// it forwards. Negative delays are an argument error.
std::unique_ptr<DetectorBackend> mock_latency_wrap(std::unique_ptr<DetectorBackend> inner,
                                                   double load_delay_s, double infer_delay_s);
std::unique_ptr<DepthBackend> mock_latency_wrap(std::unique_ptr<DepthBackend> inner,
                                                double load_delay_s, double infer_delay_s);
std::unique_ptr<ClassifierBackend> mock_latency_wrap(std::unique_ptr<ClassifierBackend> inner,
                                                     double load_delay_s, double infer_delay_s);

/// Restricts the graph runtime to one thread so repeated runs produce
/// identical outputs.
void set_deterministic_execution(bool enabled);

/// Sidecar metadata stored next to each graph file.
struct GraphMetadata {
  BackendRole role = BackendRole::classifier;
  std::vector<int> input_shape;           // N, C, H, W
  std::vector<double> mean{0.0, 0.0, 0.0};
  std::vector<double> std{1.0, 1.0, 1.0};
  std::vector<std::string> class_names;   // classifiers only
  int person_class = 0;                   // detectors only
};

std::filesystem::path sidecar_path(const std::filesystem::path& graph);
GraphMetadata read_graph_metadata(const std::filesystem::path& sidecar);

namespace detail {

std::unique_ptr<DetectorBackend> load_onnx_detector(const std::filesystem::path& graph);
std::unique_ptr<DepthBackend> load_onnx_depth(const std::filesystem::path& graph);
std::unique_ptr<ClassifierBackend> load_onnx_classifier(const std::filesystem::path& graph);

/// Letterbox geometry for squeezing a frame into a square network input.
struct Letterbox {
  double scale = 1.0;
  int pad_x = 0;
  int pad_y = 0;
  int scaled_w = 0;
  int scaled_h = 0;
};

Letterbox letterbox_geometry(int frame_w, int frame_h, int target) noexcept;
Box unletterbox(const Box& box, const Letterbox& lb) noexcept;

}  // namespace detail

}  // namespace skillbench
