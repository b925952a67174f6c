#include "skillbench/skillbench.h"

#include <cstring>
#include <exception>
#include <memory>
#include <string>

#include "skillbench/app.hpp"
#include "skillbench/dataset_io.hpp"
#include "skillbench/depth.hpp"
#include "skillbench/error.hpp"
#include "skillbench/image.hpp"
#include "skillbench/metrics.hpp"
#include "skillbench/selection.hpp"

struct sb_frame {
  skillbench::Frame frame;
};

struct sb_config {
  skillbench::RunConfig config;
};

namespace {

using skillbench::Error;
using skillbench::ErrorCode;

thread_local std::string g_last_error;

sb_status to_status(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::argument: return SB_ERR_ARGUMENT;
    case ErrorCode::bounds: return SB_ERR_BOUNDS;
    case ErrorCode::data: return SB_ERR_DATA;
    case ErrorCode::parse: return SB_ERR_PARSE;
    case ErrorCode::config: return SB_ERR_CONFIG;
    case ErrorCode::io: return SB_ERR_IO;
    case ErrorCode::missing_backend: return SB_ERR_MISSING_BACKEND;
    case ErrorCode::backend_load: return SB_ERR_BACKEND_LOAD;
    case ErrorCode::shape_mismatch: return SB_ERR_SHAPE_MISMATCH;
    case ErrorCode::unsupported_operator: return SB_ERR_UNSUPPORTED_OPERATOR;
    case ErrorCode::backend_failure: return SB_ERR_BACKEND_FAILURE;
    case ErrorCode::domain: return SB_ERR_DOMAIN;
    case ErrorCode::internal: return SB_ERR_INTERNAL;
  }
  return SB_ERR_INTERNAL;
}

sb_status fail(sb_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `fn`, translating exceptions into a status and the thread's last error.
template <typename Fn>
sb_status guard(Fn&& fn) noexcept {
  try {
    fn();
    return SB_OK;
  } catch (const Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SB_ERR_INTERNAL, "unknown exception");
  }
}

void require(const void* p, const char* name) {
  if (p == nullptr) throw Error(ErrorCode::argument, std::string(name) + " must not be NULL");
}

skillbench::SelectionConfig to_cpp(const sb_selection_config* c) {
  skillbench::SelectionConfig s;
  if (c == nullptr) return s;
  s.conf_weight = c->conf_weight;
  s.area_weight = c->area_weight;
  s.min_area_fraction = c->min_area_fraction;
  s.fallback_scale = c->fallback_scale;
  s.enlarge_max = c->enlarge_max;
  s.enlarge_min = c->enlarge_min;
  s.detector_conf_threshold = c->detector_conf_threshold;
  s.validate();
  return s;
}

sb_region to_c(const skillbench::PatchRegion& r) { return {r.x0, r.y0, r.x1, r.y1}; }
skillbench::PatchRegion to_cpp(sb_region r) { return {r.x0, r.y0, r.x1, r.y1}; }

skillbench::Detection to_cpp(const sb_detection& d) {
  return {{d.x0, d.y0, d.x1, d.y1}, d.confidence};
}

sb_frame* wrap(skillbench::Frame f) { return new sb_frame{std::move(f)}; }

}  // namespace

extern "C" {

const char* sb_version(void) { return "1.0.0"; }

const char* sb_status_string(sb_status status) {
  switch (status) {
    case SB_OK: return "ok";
    case SB_ERR_ARGUMENT: return "argument error";
    case SB_ERR_BOUNDS: return "bounds error";
    case SB_ERR_DATA: return "data error";
    case SB_ERR_PARSE: return "parse error";
    case SB_ERR_CONFIG: return "config error";
    case SB_ERR_IO: return "I/O error";
    case SB_ERR_MISSING_BACKEND: return "missing backend";
    case SB_ERR_BACKEND_LOAD: return "backend load error";
    case SB_ERR_SHAPE_MISMATCH: return "shape mismatch";
    case SB_ERR_UNSUPPORTED_OPERATOR: return "unsupported operator";
    case SB_ERR_BACKEND_FAILURE: return "backend failure";
    case SB_ERR_DOMAIN: return "domain error";
    case SB_ERR_INTERNAL: return "internal error";
    case SB_ERR_PARTIAL: return "partial failure";
  }
  return "unknown status";
}

const char* sb_last_error(void) { return g_last_error.c_str(); }

int sb_exit_code(sb_status status) {
  switch (status) {
    case SB_OK: return 0;
    case SB_ERR_PARTIAL: return 1;
    case SB_ERR_ARGUMENT: return skillbench::exit_code_for(ErrorCode::argument);
    case SB_ERR_BOUNDS: return skillbench::exit_code_for(ErrorCode::bounds);
    case SB_ERR_DATA: return skillbench::exit_code_for(ErrorCode::data);
    case SB_ERR_PARSE: return skillbench::exit_code_for(ErrorCode::parse);
    case SB_ERR_CONFIG: return skillbench::exit_code_for(ErrorCode::config);
    case SB_ERR_IO: return skillbench::exit_code_for(ErrorCode::io);
    case SB_ERR_MISSING_BACKEND: return skillbench::exit_code_for(ErrorCode::missing_backend);
    case SB_ERR_BACKEND_LOAD: return skillbench::exit_code_for(ErrorCode::backend_load);
    case SB_ERR_SHAPE_MISMATCH: return skillbench::exit_code_for(ErrorCode::shape_mismatch);
    case SB_ERR_UNSUPPORTED_OPERATOR: return skillbench::exit_code_for(ErrorCode::unsupported_operator);
    case SB_ERR_BACKEND_FAILURE: return skillbench::exit_code_for(ErrorCode::backend_failure);
    case SB_ERR_DOMAIN: return skillbench::exit_code_for(ErrorCode::domain);
    case SB_ERR_INTERNAL: return skillbench::exit_code_for(ErrorCode::internal);
  }
  return 3;
}

sb_status sb_frame_create(int width, int height, const uint8_t* rgb, sb_frame** out) {
  return guard([&] {
    require(rgb, "rgb");
    require(out, "out");
    if (width < 1 || height < 1) throw Error(ErrorCode::argument, "frame dimensions must be positive");
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 3;
    *out = wrap(skillbench::Frame(width, height, std::vector<uint8_t>(rgb, rgb + n)));
  });
}

sb_status sb_frame_load(const char* path, sb_frame** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = wrap(skillbench::load_frame(path));
  });
}

sb_status sb_frame_save_png(const sb_frame* frame, const char* path) {
  return guard([&] {
    require(frame, "frame");
    require(path, "path");
    skillbench::save_png(frame->frame, path);
  });
}

void sb_frame_destroy(sb_frame* frame) { delete frame; }

int sb_frame_width(const sb_frame* frame) { return frame ? frame->frame.width() : 0; }
int sb_frame_height(const sb_frame* frame) { return frame ? frame->frame.height() : 0; }
const uint8_t* sb_frame_pixels(const sb_frame* frame) {
  return frame ? frame->frame.pixels().data() : nullptr;
}

sb_status sb_frame_crop(const sb_frame* frame, sb_region region, sb_frame** out) {
  return guard([&] {
    require(frame, "frame");
    require(out, "out");
    *out = wrap(skillbench::crop(frame->frame, to_cpp(region)));
  });
}

sb_status sb_frame_resize(const sb_frame* frame, int width, int height, sb_frame** out) {
  return guard([&] {
    require(frame, "frame");
    require(out, "out");
    *out = wrap(skillbench::resize_bilinear(frame->frame, width, height));
  });
}

sb_status sb_render_depth(int width, int height, const double* values, sb_frame** out) {
  return guard([&] {
    require(values, "values");
    require(out, "out");
    if (width < 1 || height < 1) throw Error(ErrorCode::argument, "depth dimensions must be positive");
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    *out = wrap(skillbench::render_depth(
        skillbench::DepthMap(width, height, std::vector<double>(values, values + n))));
  });
}

void sb_selection_config_default(sb_selection_config* cfg) {
  if (cfg == nullptr) return;
  const skillbench::SelectionConfig d;
  *cfg = {d.conf_weight, d.area_weight, d.min_area_fraction, d.fallback_scale,
          d.enlarge_max, d.enlarge_min, d.detector_conf_threshold};
}

sb_status sb_score_detection(const sb_detection* detection, int frame_w, int frame_h,
                             const sb_selection_config* cfg, double* out) {
  return guard([&] {
    require(detection, "detection");
    require(out, "out");
    *out = skillbench::score_detection(to_cpp(*detection), frame_w, frame_h, to_cpp(cfg));
  });
}

sb_status sb_select_primary(const sb_detection* detections, size_t count, int frame_w, int frame_h,
                            const sb_selection_config* cfg, sb_selection_outcome* out) {
  return guard([&] {
    if (count > 0) require(detections, "detections");
    require(out, "out");
    std::vector<skillbench::Detection> dets;
    dets.reserve(count);
    for (size_t i = 0; i < count; ++i) dets.push_back(to_cpp(detections[i]));
    const auto sel = skillbench::select_primary(dets, frame_w, frame_h, to_cpp(cfg));
    out->region = to_c(sel.region);
    out->detected = sel.source == skillbench::SelectionSource::detected;
    out->score = sel.score.value_or(0.0);
    out->chosen = sel.chosen ? static_cast<int64_t>(*sel.chosen) : -1;
  });
}

sb_status sb_fallback_center_crop(int frame_w, int frame_h, const sb_selection_config* cfg,
                                  sb_region* out) {
  return guard([&] {
    require(out, "out");
    *out = to_c(skillbench::fallback_center_crop(frame_w, frame_h, to_cpp(cfg)));
  });
}

sb_status sb_enlarge_box(sb_region box, int frame_w, int frame_h, const sb_selection_config* cfg,
                         sb_region* out) {
  return guard([&] {
    require(out, "out");
    *out = to_c(skillbench::enlarge_box(to_cpp(box), frame_w, frame_h, to_cpp(cfg)));
  });
}

sb_status sb_compute_waitt(double accuracy, double inference_time_s, double alpha, double gamma,
                           double* out) {
  return guard([&] {
    require(out, "out");
    *out = skillbench::compute_waitt(accuracy, inference_time_s, {alpha, gamma});
  });
}

sb_status sb_config_create(sb_config** out) {
  return guard([&] {
    require(out, "out");
    *out = new sb_config{};
  });
}

sb_status sb_config_load(const char* path, sb_config** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = new sb_config{skillbench::load_config(path)};
  });
}

void sb_config_destroy(sb_config* config) { delete config; }

sb_status sb_config_set_approach(sb_config* config, const char* approach) {
  return guard([&] {
    require(config, "config");
    require(approach, "approach");
    const auto a = skillbench::parse_approach(approach);
    if (!a) throw Error(ErrorCode::config, std::string("unknown approach '") + approach + "'");
    config->config.approach = *a;
  });
}

sb_status sb_config_set_manifest(sb_config* config, const char* path) {
  return guard([&] {
    require(config, "config");
    require(path, "path");
    config->config.manifest = path;
  });
}

sb_status sb_config_set_output_dir(sb_config* config, const char* path) {
  return guard([&] {
    require(config, "config");
    require(path, "path");
    config->config.output_dir = path;
  });
}

sb_status sb_config_set_workers(sb_config* config, int workers) {
  return guard([&] {
    require(config, "config");
    if (workers < 1) throw Error(ErrorCode::config, "workers must be at least 1");
    config->config.workers = workers;
  });
}

sb_status sb_config_set_fail_fast(sb_config* config, int enabled) {
  return guard([&] {
    require(config, "config");
    config->config.fail_fast = enabled != 0;
  });
}

sb_status sb_config_use_mock_backends(sb_config* config) {
  return guard([&] {
    require(config, "config");
    skillbench::use_mock_backends(config->config);
  });
}

sb_status sb_config_set_supplied_accuracy(sb_config* config, double accuracy) {
  return guard([&] {
    require(config, "config");
    if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
      throw Error(ErrorCode::config, "supplied accuracy must lie in [0,1]");
    }
    config->config.supplied_accuracy = accuracy;
  });
}

sb_status sb_config_snapshot(const sb_config* config, char** out) {
  return guard([&] {
    require(config, "config");
    require(out, "out");
    const std::string s = config->config.snapshot().dump(2);
    auto* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

void sb_string_free(char* s) { delete[] s; }

sb_status sb_run_command(const sb_config* config, const char* command, sb_run_summary* out) {
  skillbench::CommandOutcome outcome;
  const sb_status status = guard([&] {
    require(config, "config");
    require(command, "command");
    outcome = skillbench::run_command(command, config->config);
  });
  if (status != SB_OK) return status;
  if (out != nullptr) *out = {outcome.frames, outcome.failures, outcome.exit_code};
  switch (outcome.exit_code) {
    case 0: return SB_OK;
    case 1: return fail(SB_ERR_PARTIAL, outcome.message);
    default: return fail(to_status(outcome.code), outcome.message);
  }
}

void sb_init_logging(void) { skillbench::init_logging(); }

}  // extern "C"
