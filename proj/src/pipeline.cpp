#include "skillbench/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

#include "skillbench/depth.hpp"

namespace skillbench {

namespace {

using Clock = std::chrono::steady_clock;

// Times `fn` and tags any failure with the stage name.
template <typename Fn>
auto stage(const char* name, std::vector<StageTiming>& timings, Fn&& fn) {
  const auto start = Clock::now();
  auto record = [&] {
    timings.push_back({name, std::chrono::duration<double>(Clock::now() - start).count()});
  };
  try {
    auto value = fn();
    record();
    return value;
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(e.code(), name, e.what());
  } catch (const std::exception& e) {
    throw StageError(ErrorCode::backend_failure, name, e.what());
  }
}

void require(const void* backend, const char* role, ApproachId approach) {
  if (backend == nullptr) {
    throw Error(ErrorCode::missing_backend, std::string("approach ") + to_string(approach) +
                                                " needs a " + role + " backend");
  }
}

}  // namespace

const char* to_string(ApproachId approach) noexcept {
  switch (approach) {
    case ApproachId::full_rgb: return "full-rgb";
    case ApproachId::full_depth: return "full-depth";
    case ApproachId::rgb_patch: return "rgb-patch";
    case ApproachId::depth_patch: return "depth-patch";
  }
  return "?";
}

std::optional<ApproachId> parse_approach(std::string_view name) noexcept {
  std::string n(name);
  for (char& c : n) {
    if (c == '_') c = '-';
  }
  for (ApproachId a : kAllApproaches) {
    if (n == to_string(a)) return a;
  }
  return std::nullopt;
}

bool needs_detector(ApproachId approach) noexcept {
  return approach == ApproachId::rgb_patch || approach == ApproachId::depth_patch;
}

bool needs_depth(ApproachId approach) noexcept {
  return approach == ApproachId::full_depth || approach == ApproachId::depth_patch;
}

double FrameResult::total_seconds() const noexcept {
  double t = 0.0;
  for (const StageTiming& s : stage_timings) t += s.seconds;
  return t;
}

BackendSet load_backends(const BackendSpecs& specs, ApproachId approach,
                         const SelectionConfig& cfg) {
  auto spec_for = [&](const std::optional<BackendSpec>& s, const char* role) -> const BackendSpec& {
    if (!s) {
      throw Error(ErrorCode::missing_backend, std::string("approach ") + to_string(approach) +
                                                  " needs a " + role + " backend");
    }
    return *s;
  };
  BackendSet set;
  if (needs_detector(approach)) {
    set.detector = filter_detections(load_detector(spec_for(specs.detector, "detector")),
                                     cfg.detector_conf_threshold);
  }
  if (needs_depth(approach)) set.depth = load_depth(spec_for(specs.depth, "depth"));
  set.classifier = load_classifier(spec_for(specs.classifier, "classifier"));
  return set;
}

FrameResult run_frame(std::string frame_id, const Frame& frame, ApproachId approach,
                      const Backends& backends, const SelectionConfig& cfg) {
  require(backends.classifier, "classifier", approach);
  if (needs_detector(approach)) require(backends.detector, "detector", approach);
  if (needs_depth(approach)) require(backends.depth, "depth", approach);

  FrameResult r;
  r.frame_id = std::move(frame_id);
  r.approach = approach;
  auto& t = r.stage_timings;

  const Frame* subject = &frame;
  Frame patch(1, 1);
  if (needs_detector(approach)) {
    const auto dets = stage("detect", t, [&] { return backends.detector->detect(frame); });
    r.selection = stage("select", t, [&] {
      return select_primary(dets, frame.width(), frame.height(), cfg);
    });
    patch = stage("crop", t, [&] { return crop(frame, r.selection->region); });
    subject = &patch;
  }

  Frame rendered(1, 1);
  if (needs_depth(approach)) {
    const DepthMap depth = stage("depth", t, [&] {
      DepthMap d = backends.depth->estimate(*subject);
      if (d.width() != subject->width() || d.height() != subject->height()) {
        throw Error(ErrorCode::shape_mismatch, "depth map size differs from its input");
      }
      return d;
    });
    rendered = stage("render", t, [&] { return render_depth(depth); });
    subject = &rendered;
  }

  const Frame input = stage("resize", t, [&] {
    return resize_bilinear(*subject, kClassifierInputSize, kClassifierInputSize);
  });
  r.scores = stage("classify", t, [&] { return backends.classifier->classify(input); });
  r.predicted = r.scores.argmax();
  return r;
}

std::vector<BatchEntry> run_batch(std::span<const BatchItem> items, ApproachId approach,
                                  const BackendFactory& factory, const SelectionConfig& cfg,
                                  const BatchOptions& options) {
  if (options.workers < 1) throw Error(ErrorCode::argument, "workers must be at least 1");
  std::vector<std::optional<BatchEntry>> slots(items.size());
  if (items.empty()) return {};

  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex failure_mutex;
  std::exception_ptr fatal;          // backend construction failure
  std::optional<std::size_t> first_failed;

  auto worker = [&] {
    BackendSet set;
    try {
      set = factory();
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!fatal) fatal = std::current_exception();
      stop = true;
      return;
    }
    const Backends view = set.view();
    while (!stop) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) break;
      const BatchItem& item = items[i];
      try {
        Frame frame = [&] {
          try {
            return item.load();
          } catch (const Error& e) {
            throw StageError(e.code(), "load", e.what());
          } catch (const std::exception& e) {
            throw StageError(ErrorCode::io, "load", e.what());
          }
        }();
        slots[i] = run_frame(item.frame_id, frame, approach, view, cfg);
      } catch (const StageError& e) {
        slots[i] = FrameError{item.frame_id, e.stage(), e.code(), e.detail()};
      } catch (const Error& e) {
        slots[i] = FrameError{item.frame_id, "pipeline", e.code(), e.what()};
      } catch (const std::exception& e) {
        slots[i] = FrameError{item.frame_id, "pipeline", ErrorCode::internal, e.what()};
      }
      if (options.fail_fast && std::holds_alternative<FrameError>(*slots[i])) {
        std::lock_guard lock(failure_mutex);
        if (!first_failed || i < *first_failed) first_failed = i;
        stop = true;
      }
    }
  };

  const int n = std::min<int>(options.workers, static_cast<int>(items.size()));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  }

  if (fatal) std::rethrow_exception(fatal);
  if (first_failed) {
    const auto& err = std::get<FrameError>(*slots[*first_failed]);
    throw StageError(err.code, err.stage, "frame '" + err.frame_id + "': " + err.message);
  }
  std::vector<BatchEntry> out;
  out.reserve(items.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace skillbench
