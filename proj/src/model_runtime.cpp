#include "skillbench/model_runtime.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "skillbench/error.hpp"

namespace skillbench {

namespace {

using json = nlohmann::json;

double luma(Rgb c) noexcept { return 0.299 * c.r + 0.587 * c.g + 0.114 * c.b; }

void sleep_for_seconds(double s) {
  if (s > 0.0) std::this_thread::sleep_for(std::chrono::duration<double>(s));
}

void check_delays(double load_delay_s, double infer_delay_s) {
  if (!(load_delay_s >= 0.0) || !(infer_delay_s >= 0.0)) {
    throw Error(ErrorCode::argument, "mock delays must be non-negative");
  }
}

// --- mocks -----------------------------------------------------------------

class FixedDetector final : public DetectorBackend {
 public:
  explicit FixedDetector(std::vector<Detection> boxes) : boxes_(std::move(boxes)) {}
  std::vector<Detection> detect(const Frame&) override { return boxes_; }

 private:
  std::vector<Detection> boxes_;
};

class BrightRegionDetector final : public DetectorBackend {
 public:
  BrightRegionDetector(int threshold, double confidence)
      : threshold_(threshold), confidence_(confidence) {}

  std::vector<Detection> detect(const Frame& frame) override {
    int x0 = frame.width(), y0 = frame.height(), x1 = -1, y1 = -1;
    for (int y = 0; y < frame.height(); ++y) {
      for (int x = 0; x < frame.width(); ++x) {
        if (luma(frame.at(x, y)) >= threshold_) {
          x0 = std::min(x0, x);
          y0 = std::min(y0, y);
          x1 = std::max(x1, x);
          y1 = std::max(y1, y);
        }
      }
    }
    if (x1 < 0) return {};
    return {Detection{{static_cast<double>(x0), static_cast<double>(y0),
                       static_cast<double>(x1 + 1), static_cast<double>(y1 + 1)},
                      confidence_}};
  }

 private:
  int threshold_;
  double confidence_;
};

class LuminanceDepth final : public DepthBackend {
 public:
  DepthMap estimate(const Frame& frame) override {
    std::vector<double> v(static_cast<std::size_t>(frame.width()) *
                          static_cast<std::size_t>(frame.height()));
    std::size_t i = 0;
    for (int y = 0; y < frame.height(); ++y) {
      for (int x = 0; x < frame.width(); ++x) v[i++] = luma(frame.at(x, y));
    }
    return DepthMap(frame.width(), frame.height(), std::move(v));
  }
};

class ConstantDepth final : public DepthBackend {
 public:
  DepthMap estimate(const Frame& frame) override {
    return DepthMap(frame.width(), frame.height(),
                    std::vector<double>(static_cast<std::size_t>(frame.width()) *
                                            static_cast<std::size_t>(frame.height()),
                                        1.0));
  }
};

class ConstantClassifier final : public ClassifierBackend {
 public:
  explicit ConstantClassifier(ClassScores scores) : scores_(scores) {}
  ClassScores classify(const Frame&) override { return scores_; }

 private:
  ClassScores scores_;
};

class MeanRedClassifier final : public ClassifierBackend {
 public:
  explicit MeanRedClassifier(double peak) : peak_(peak) {}

  ClassScores classify(const Frame& frame) override {
    const auto px = frame.pixels();
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < px.size(); i += 3) sum += px[i];
    const double mean = static_cast<double>(sum) / static_cast<double>(px.size() / 3);
    const auto bin = std::min<std::size_t>(kNumLabels - 1,
                                           static_cast<std::size_t>(mean * kNumLabels / 256.0));
    return ClassScores::peaked(kAllLabels[bin], peak_);
  }

 private:
  double peak_;
};

class ContentHashClassifier final : public ClassifierBackend {
 public:
  ClassScores classify(const Frame& frame) override {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t byte) {
      h ^= byte;
      h *= 1099511628211ull;
    };
    mix(static_cast<std::uint64_t>(frame.width()));
    mix(static_cast<std::uint64_t>(frame.height()));
    for (std::uint8_t b : frame.pixels()) mix(b);
    std::array<double, kNumLabels> logits{};
    for (double& l : logits) {
      h += 0x9e3779b97f4a7c15ull;
      std::uint64_t z = h;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      z ^= z >> 31;
      l = static_cast<double>(z >> 11) / static_cast<double>(1ull << 53) * 6.0 - 3.0;
    }
    return ClassScores::from_logits(std::span<const double>(logits));
  }
};

// --- wrappers --------------------------------------------------------------

class FilteredDetector final : public DetectorBackend {
 public:
  FilteredDetector(std::unique_ptr<DetectorBackend> inner, double threshold)
      : inner_(std::move(inner)), threshold_(threshold) {}

  std::vector<Detection> detect(const Frame& frame) override {
    std::vector<Detection> out;
    for (const Detection& d : inner_->detect(frame)) {
      if (!(d.confidence >= threshold_)) continue;
      if (!(intersect_frame(d.box, frame.width(), frame.height()).area() > 0.0)) continue;
      out.push_back(d);
    }
    return out;
  }

 private:
  std::unique_ptr<DetectorBackend> inner_;
  double threshold_;
};

template <typename Base>
class Delayed;

template <>
class Delayed<DetectorBackend> final : public DetectorBackend {
 public:
  Delayed(std::unique_ptr<DetectorBackend> inner, double load, double infer)
      : inner_(std::move(inner)), infer_(infer) {
    sleep_for_seconds(load);
  }
  std::vector<Detection> detect(const Frame& frame) override {
    sleep_for_seconds(infer_);
    return inner_->detect(frame);
  }

 private:
  std::unique_ptr<DetectorBackend> inner_;
  double infer_;
};

template <>
class Delayed<DepthBackend> final : public DepthBackend {
 public:
  Delayed(std::unique_ptr<DepthBackend> inner, double load, double infer)
      : inner_(std::move(inner)), infer_(infer) {
    sleep_for_seconds(load);
  }
  DepthMap estimate(const Frame& frame) override {
    sleep_for_seconds(infer_);
    return inner_->estimate(frame);
  }

 private:
  std::unique_ptr<DepthBackend> inner_;
  double infer_;
};

template <>
class Delayed<ClassifierBackend> final : public ClassifierBackend {
 public:
  Delayed(std::unique_ptr<ClassifierBackend> inner, double load, double infer)
      : inner_(std::move(inner)), infer_(infer) {
    sleep_for_seconds(load);
  }
  ClassScores classify(const Frame& frame) override {
    sleep_for_seconds(infer_);
    return inner_->classify(frame);
  }

 private:
  std::unique_ptr<ClassifierBackend> inner_;
  double infer_;
};

template <typename Base>
std::unique_ptr<Base> wrap(std::unique_ptr<Base> inner, double load, double infer) {
  check_delays(load, infer);
  if (!inner) throw Error(ErrorCode::argument, "cannot wrap an empty backend handle");
  return std::make_unique<Delayed<Base>>(std::move(inner), load, infer);
}

template <typename Base>
std::unique_ptr<Base> maybe_delay(std::unique_ptr<Base> inner, const MockParams& m) {
  check_delays(m.load_delay_s, m.infer_delay_s);
  if (m.load_delay_s == 0.0 && m.infer_delay_s == 0.0) return inner;
  return wrap(std::move(inner), m.load_delay_s, m.infer_delay_s);
}

[[noreturn]] void unknown_mode(BackendRole role, const std::string& mode) {
  throw Error(ErrorCode::config,
              std::string("unknown mock mode '") + mode + "' for " + to_string(role));
}

void require_graph(const BackendSpec& spec) {
  if (spec.path.empty()) throw Error(ErrorCode::config, "graph_file backend needs a path");
  if (!std::filesystem::exists(spec.path)) {
    throw Error(ErrorCode::backend_load, "model file not found: " + spec.path.string());
  }
}

}  // namespace

const char* to_string(BackendRole role) noexcept {
  switch (role) {
    case BackendRole::detector: return "detector";
    case BackendRole::depth: return "depth";
    case BackendRole::classifier: return "classifier";
  }
  return "?";
}

std::unique_ptr<DetectorBackend> load_detector(const BackendSpec& spec) {
  if (spec.kind == BackendKind::graph_file) {
    require_graph(spec);
    return detail::load_onnx_detector(spec.path);
  }
  const MockParams& m = spec.mock;
  std::unique_ptr<DetectorBackend> d;
  if (m.mode == "none") {
    d = std::make_unique<FixedDetector>(std::vector<Detection>{});
  } else if (m.mode == "fixed") {
    for (const Detection& det : m.boxes) {
      if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) {
        throw Error(ErrorCode::config, "mock detector confidence outside [0,1]");
      }
    }
    d = std::make_unique<FixedDetector>(m.boxes);
  } else if (m.mode == "bright_region") {
    if (!(m.confidence >= 0.0 && m.confidence <= 1.0)) {
      throw Error(ErrorCode::config, "mock detector confidence outside [0,1]");
    }
    d = std::make_unique<BrightRegionDetector>(m.luma_threshold, m.confidence);
  } else {
    unknown_mode(BackendRole::detector, m.mode);
  }
  return maybe_delay(std::move(d), m);
}

std::unique_ptr<DepthBackend> load_depth(const BackendSpec& spec) {
  if (spec.kind == BackendKind::graph_file) {
    require_graph(spec);
    return detail::load_onnx_depth(spec.path);
  }
  const MockParams& m = spec.mock;
  std::unique_ptr<DepthBackend> d;
  if (m.mode == "luminance") {
    d = std::make_unique<LuminanceDepth>();
  } else if (m.mode == "constant") {
    d = std::make_unique<ConstantDepth>();
  } else {
    unknown_mode(BackendRole::depth, m.mode);
  }
  return maybe_delay(std::move(d), m);
}

std::unique_ptr<ClassifierBackend> load_classifier(const BackendSpec& spec) {
  if (spec.kind == BackendKind::graph_file) {
    require_graph(spec);
    return detail::load_onnx_classifier(spec.path);
  }
  const MockParams& m = spec.mock;
  std::unique_ptr<ClassifierBackend> c;
  if (m.mode == "constant") {
    c = std::make_unique<ConstantClassifier>(ClassScores::peaked(m.label, m.peak));
  } else if (m.mode == "mean_red") {
    ClassScores::peaked(m.label, m.peak);  // validates peak
    c = std::make_unique<MeanRedClassifier>(m.peak);
  } else if (m.mode == "content_hash") {
    c = std::make_unique<ContentHashClassifier>();
  } else {
    unknown_mode(BackendRole::classifier, m.mode);
  }
  return maybe_delay(std::move(c), m);
}

BackendHandle load_backend(const BackendSpec& spec, BackendRole role) {
  BackendHandle h{role, nullptr, nullptr, nullptr};
  switch (role) {
    case BackendRole::detector: h.detector = load_detector(spec); break;
    case BackendRole::depth: h.depth = load_depth(spec); break;
    case BackendRole::classifier: h.classifier = load_classifier(spec); break;
  }
  return h;
}

std::unique_ptr<DetectorBackend> filter_detections(std::unique_ptr<DetectorBackend> inner,
                                                   double conf_threshold) {
  if (!inner) throw Error(ErrorCode::argument, "cannot wrap an empty backend handle");
  return std::make_unique<FilteredDetector>(std::move(inner), conf_threshold);
}

std::unique_ptr<DetectorBackend> mock_latency_wrap(std::unique_ptr<DetectorBackend> inner,
                                                   double load_delay_s, double infer_delay_s) {
  return wrap(std::move(inner), load_delay_s, infer_delay_s);
}

std::unique_ptr<DepthBackend> mock_latency_wrap(std::unique_ptr<DepthBackend> inner,
                                                double load_delay_s, double infer_delay_s) {
  return wrap(std::move(inner), load_delay_s, infer_delay_s);
}

std::unique_ptr<ClassifierBackend> mock_latency_wrap(std::unique_ptr<ClassifierBackend> inner,
                                                     double load_delay_s, double infer_delay_s) {
  return wrap(std::move(inner), load_delay_s, infer_delay_s);
}

std::filesystem::path sidecar_path(const std::filesystem::path& graph) {
  std::filesystem::path p = graph;
  p.replace_extension(".json");
  return p;
}

GraphMetadata read_graph_metadata(const std::filesystem::path& sidecar) {
  std::ifstream in(sidecar);
  if (!in) throw Error(ErrorCode::backend_load, "missing sidecar metadata " + sidecar.string());
  GraphMetadata meta;
  try {
    const json j = json::parse(in);
    const std::string role = j.at("role").get<std::string>();
    if (role == "detector") {
      meta.role = BackendRole::detector;
    } else if (role == "depth") {
      meta.role = BackendRole::depth;
    } else if (role == "classifier") {
      meta.role = BackendRole::classifier;
    } else {
      throw Error(ErrorCode::backend_load, sidecar.string() + ": unknown role '" + role + "'");
    }
    meta.input_shape = j.at("input_shape").get<std::vector<int>>();
    if (j.contains("mean")) meta.mean = j.at("mean").get<std::vector<double>>();
    if (j.contains("std")) meta.std = j.at("std").get<std::vector<double>>();
    if (j.contains("class_names")) meta.class_names = j.at("class_names").get<std::vector<std::string>>();
    if (j.contains("person_class")) meta.person_class = j.at("person_class").get<int>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::backend_load, sidecar.string() + ": " + e.what());
  }
  if (meta.input_shape.size() != 4 || meta.input_shape[0] != 1 || meta.input_shape[1] != 3 ||
      meta.input_shape[2] < 1 || meta.input_shape[3] < 1) {
    throw Error(ErrorCode::shape_mismatch,
                sidecar.string() + ": input_shape must be [1, 3, H, W] with positive H, W");
  }
  if (meta.mean.size() != 3 || meta.std.size() != 3) {
    throw Error(ErrorCode::backend_load, sidecar.string() + ": mean and std need 3 entries");
  }
  for (double s : meta.std) {
    if (!(s > 0.0)) throw Error(ErrorCode::backend_load, sidecar.string() + ": std must be > 0");
  }
  return meta;
}

namespace detail {

Letterbox letterbox_geometry(int frame_w, int frame_h, int target) noexcept {
  Letterbox lb;
  lb.scale = std::min(static_cast<double>(target) / frame_w, static_cast<double>(target) / frame_h);
  lb.scaled_w = std::max(1, static_cast<int>(std::lround(frame_w * lb.scale)));
  lb.scaled_h = std::max(1, static_cast<int>(std::lround(frame_h * lb.scale)));
  lb.pad_x = (target - lb.scaled_w) / 2;
  lb.pad_y = (target - lb.scaled_h) / 2;
  return lb;
}

Box unletterbox(const Box& box, const Letterbox& lb) noexcept {
  return {(box.x0 - lb.pad_x) / lb.scale, (box.y0 - lb.pad_y) / lb.scale,
          (box.x1 - lb.pad_x) / lb.scale, (box.y1 - lb.pad_y) / lb.scale};
}

}  // namespace detail

}  // namespace skillbench
