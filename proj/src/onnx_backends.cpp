// ONNX graph backends on top of OpenCV's dnn module.

#include <algorithm>
#include <cmath>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/core/utils/logger.hpp>
#include <opencv2/dnn.hpp>

#include "skillbench/error.hpp"
#include "skillbench/model_runtime.hpp"

namespace skillbench {

namespace {

std::string shape_string(const cv::Mat& m) {
  std::string s = "[";
  for (int i = 0; i < m.dims; ++i) {
    if (i) s += ", ";
    s += std::to_string(m.size[i]);
  }
  return s + "]";
}

cv::dnn::Net read_graph(const std::filesystem::path& graph) {
  // Import failures are reported through Error; OpenCV's own log would
  // print them a second time.
  static const bool quiet = [] {
    cv::utils::logging::setLogLevel(cv::utils::logging::LOG_LEVEL_SILENT);
    return true;
  }();
  (void)quiet;
  try {
    cv::dnn::Net net = cv::dnn::readNetFromONNX(graph.string());
    if (net.empty()) throw Error(ErrorCode::backend_load, "empty graph: " + graph.string());
    net.setPreferableBackend(cv::dnn::DNN_BACKEND_OPENCV);
    net.setPreferableTarget(cv::dnn::DNN_TARGET_CPU);
    return net;
  } catch (const cv::Exception& e) {
    const std::string msg = e.what();
    if (msg.find("Can't create layer") != std::string::npos ||
        msg.find("nsupported") != std::string::npos) {
      throw Error(ErrorCode::unsupported_operator, graph.string() + ": " + msg);
    }
    throw Error(ErrorCode::backend_load, graph.string() + ": " + msg);
  }
}

cv::Mat forward(cv::dnn::Net& net, const cv::Mat& blob, const char* stage) {
  try {
    net.setInput(blob);
    return net.forward().clone();
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::backend_failure, std::string(stage) + " forward pass: " + e.what());
  }
}

GraphMetadata load_metadata(const std::filesystem::path& graph, BackendRole role) {
  GraphMetadata meta = read_graph_metadata(sidecar_path(graph));
  if (meta.role != role) {
    throw Error(ErrorCode::backend_load, graph.string() + ": sidecar declares role " +
                                             to_string(meta.role) + ", expected " +
                                             to_string(role));
  }
  return meta;
}

// NCHW float blob, channels in RGB order, (x / 255 - mean) / std.
cv::Mat to_blob(const Frame& frame, const GraphMetadata& meta) {
  const int h = frame.height();
  const int w = frame.width();
  const int dims[] = {1, 3, h, w};
  cv::Mat blob(4, dims, CV_32F);
  float* out = blob.ptr<float>();
  const auto px = frame.pixels();
  const std::size_t plane = static_cast<std::size_t>(h) * static_cast<std::size_t>(w);
  for (std::size_t i = 0; i < plane; ++i) {
    for (std::size_t c = 0; c < 3; ++c) {
      out[c * plane + i] =
          static_cast<float>((px[i * 3 + c] / 255.0 - meta.mean[c]) / meta.std[c]);
    }
  }
  return blob;
}

cv::Mat zero_blob(const GraphMetadata& meta) {
  const int dims[] = {1, 3, meta.input_shape[2], meta.input_shape[3]};
  return cv::Mat(4, dims, CV_32F, cv::Scalar(0));
}

Frame letterbox(const Frame& frame, const detail::Letterbox& lb, int target) {
  const Frame scaled = resize_bilinear(frame, lb.scaled_w, lb.scaled_h);
  Frame canvas(target, target, Rgb{114, 114, 114});
  for (int y = 0; y < lb.scaled_h; ++y) {
    for (int x = 0; x < lb.scaled_w; ++x) canvas.set(x + lb.pad_x, y + lb.pad_y, scaled.at(x, y));
  }
  return canvas;
}

// Half-pixel-centre bilinear resampling of a float plane.
std::vector<double> resample(const float* src, int src_w, int src_h, int dst_w, int dst_h) {
  std::vector<double> out(static_cast<std::size_t>(dst_w) * static_cast<std::size_t>(dst_h));
  auto coord = [](int i, int src_n, int dst_n) {
    const double s = (i + 0.5) * src_n / dst_n - 0.5;
    return std::clamp(s, 0.0, static_cast<double>(src_n - 1));
  };
  std::size_t o = 0;
  for (int y = 0; y < dst_h; ++y) {
    const double sy = coord(y, src_h, dst_h);
    const int y0 = static_cast<int>(sy);
    const int y1 = std::min(y0 + 1, src_h - 1);
    const double fy = sy - y0;
    for (int x = 0; x < dst_w; ++x) {
      const double sx = coord(x, src_w, dst_w);
      const int x0 = static_cast<int>(sx);
      const int x1 = std::min(x0 + 1, src_w - 1);
      const double fx = sx - x0;
      auto at = [&](int xx, int yy) { return static_cast<double>(src[yy * src_w + xx]); };
      out[o++] = (1 - fy) * ((1 - fx) * at(x0, y0) + fx * at(x1, y0)) +
                 fy * ((1 - fx) * at(x0, y1) + fx * at(x1, y1));
    }
  }
  return out;
}

class OnnxClassifier final : public ClassifierBackend {
 public:
  explicit OnnxClassifier(const std::filesystem::path& graph)
      : meta_(load_metadata(graph, BackendRole::classifier)), net_(read_graph(graph)) {
    if (meta_.input_shape[2] != kClassifierInputSize || meta_.input_shape[3] != kClassifierInputSize) {
      throw Error(ErrorCode::shape_mismatch,
                  graph.string() + ": expected classifier input [1, 3, 224, 224], found [1, 3, " +
                      std::to_string(meta_.input_shape[2]) + ", " +
                      std::to_string(meta_.input_shape[3]) + "]");
    }
    if (meta_.class_names.size() != kNumLabels) {
      throw Error(ErrorCode::shape_mismatch, graph.string() + ": expected 10 classes, sidecar lists " +
                                                 std::to_string(meta_.class_names.size()));
    }
    for (std::size_t i = 0; i < kNumLabels; ++i) {
      if (meta_.class_names[i] != to_string(kAllLabels[i])) {
        throw Error(ErrorCode::backend_load,
                    graph.string() + ": class " + std::to_string(i) + " is '" +
                        meta_.class_names[i] + "', expected '" +
                        std::string(to_string(kAllLabels[i])) + "'");
      }
    }
    const cv::Mat out = forward(net_, zero_blob(meta_), "classifier");
    if (out.total() != kNumLabels) {
      throw Error(ErrorCode::shape_mismatch, graph.string() + ": expected 10 classes, found " +
                                                 std::to_string(out.total()) + " outputs " +
                                                 shape_string(out));
    }
  }

  ClassScores classify(const Frame& frame) override {
    if (frame.width() != kClassifierInputSize || frame.height() != kClassifierInputSize) {
      return run(resize_bilinear(frame, kClassifierInputSize, kClassifierInputSize));
    }
    return run(frame);
  }

 private:
  ClassScores run(const Frame& input) {
    const cv::Mat out = forward(net_, to_blob(input, meta_), "classifier");
    return ClassScores::from_logits(std::span<const float>(out.ptr<float>(), out.total()));
  }

  GraphMetadata meta_;
  cv::dnn::Net net_;
};

class OnnxDepth final : public DepthBackend {
 public:
  explicit OnnxDepth(const std::filesystem::path& graph)
      : meta_(load_metadata(graph, BackendRole::depth)), net_(read_graph(graph)) {
    const cv::Mat out = forward(net_, zero_blob(meta_), "depth");
    plane_dims(out, graph.string());
  }

  DepthMap estimate(const Frame& frame) override {
    const Frame input = resize_bilinear(frame, meta_.input_shape[3], meta_.input_shape[2]);
    cv::Mat out = forward(net_, to_blob(input, meta_), "depth");
    const auto [h, w] = plane_dims(out, "depth");
    return DepthMap(frame.width(), frame.height(),
                    resample(out.ptr<float>(), w, h, frame.width(), frame.height()));
  }

 private:
  // Accepts [1, H, W] and [1, 1, H, W].
  static std::pair<int, int> plane_dims(const cv::Mat& out, const std::string& where) {
    if (out.dims == 3 && out.size[0] == 1) return {out.size[1], out.size[2]};
    if (out.dims == 4 && out.size[0] == 1 && out.size[1] == 1) return {out.size[2], out.size[3]};
    throw Error(ErrorCode::shape_mismatch,
                where + ": expected depth output [1, H, W] or [1, 1, H, W], found " + shape_string(out));
  }

  GraphMetadata meta_;
  cv::dnn::Net net_;
};

// End-to-end detector head: [1, N, 6] rows of x0, y0, x1, y1, score, class
// in letterboxed input coordinates.
class OnnxDetector final : public DetectorBackend {
 public:
  explicit OnnxDetector(const std::filesystem::path& graph)
      : meta_(load_metadata(graph, BackendRole::detector)), net_(read_graph(graph)) {
    if (meta_.input_shape[2] != meta_.input_shape[3]) {
      throw Error(ErrorCode::shape_mismatch, graph.string() + ": detector input must be square");
    }
    const cv::Mat out = forward(net_, zero_blob(meta_), "detector");
    check_output(out, graph.string());
  }

  std::vector<Detection> detect(const Frame& frame) override {
    const int target = meta_.input_shape[2];
    const auto lb = detail::letterbox_geometry(frame.width(), frame.height(), target);
    const cv::Mat out = forward(net_, to_blob(letterbox(frame, lb, target), meta_), "detector");
    check_output(out, "detector");
    std::vector<Detection> dets;
    const float* row = out.ptr<float>();
    for (int i = 0; i < out.size[1]; ++i, row += 6) {
      if (static_cast<int>(std::lround(row[5])) != meta_.person_class) continue;
      const double conf = std::clamp(static_cast<double>(row[4]), 0.0, 1.0);
      const Box b = detail::unletterbox({row[0], row[1], row[2], row[3]}, lb);
      if (!(b.area() > 0.0)) continue;
      dets.push_back({b, conf});
    }
    return dets;
  }

 private:
  static void check_output(const cv::Mat& out, const std::string& where) {
    if (out.dims != 3 || out.size[0] != 1 || out.size[2] != 6) {
      throw Error(ErrorCode::shape_mismatch,
                  where + ": expected detector output [1, N, 6], found " + shape_string(out));
    }
  }

  GraphMetadata meta_;
  cv::dnn::Net net_;
};

}  // namespace

void set_deterministic_execution(bool enabled) { cv::setNumThreads(enabled ? 1 : -1); }

namespace detail {

std::unique_ptr<DetectorBackend> load_onnx_detector(const std::filesystem::path& graph) {
  return std::make_unique<OnnxDetector>(graph);
}

std::unique_ptr<DepthBackend> load_onnx_depth(const std::filesystem::path& graph) {
  return std::make_unique<OnnxDepth>(graph);
}

std::unique_ptr<ClassifierBackend> load_onnx_classifier(const std::filesystem::path& graph) {
  return std::make_unique<OnnxClassifier>(graph);
}

}  // namespace detail

}  // namespace skillbench
