#include "skillbench/app.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include <spdlog/spdlog.h>

#include "skillbench/dataset_io.hpp"
#include "skillbench/depth.hpp"
#include "skillbench/error.hpp"

namespace skillbench {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// --- config parsing --------------------------------------------------------

[[noreturn]] void config_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::config, where + ": " + what);
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) config_error(where, "expected an object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || item.key() == k;
    if (!known) config_error(where, "unknown key '" + item.key() + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    config_error(where + "." + key, "wrong type");
  }
}

template <typename T>
void read(const json& obj, const char* key, std::optional<T>& out, const std::string& where) {
  if (!obj.contains(key)) return;
  T v{};
  read(obj, key, v, where);
  out = v;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

ApproachId approach_from(const json& v, const std::string& where) {
  if (!v.is_string()) config_error(where, "expected an approach name");
  const auto a = parse_approach(v.get<std::string>());
  if (!a) config_error(where, "unknown approach '" + v.get<std::string>() + "'");
  return *a;
}

BackendSpec parse_backend(const json& j, const std::string& where, const fs::path& base) {
  allow_keys(j, where, {"kind", "path", "mode", "boxes", "luma_threshold", "confidence", "label",
                        "peak", "load_delay_s", "infer_delay_s"});
  BackendSpec spec;
  std::string kind = "mock";
  read(j, "kind", kind, where);
  if (kind == "graph_file") {
    spec.kind = BackendKind::graph_file;
    std::string path;
    read(j, "path", path, where);
    if (path.empty()) config_error(where, "graph_file backend needs a path");
    spec.path = resolve(base, path);
    return spec;
  }
  if (kind != "mock") config_error(where, "kind must be 'graph_file' or 'mock'");
  MockParams& m = spec.mock;
  read(j, "mode", m.mode, where);
  if (m.mode.empty()) config_error(where, "mock backend needs a mode");
  read(j, "luma_threshold", m.luma_threshold, where);
  read(j, "confidence", m.confidence, where);
  read(j, "peak", m.peak, where);
  read(j, "load_delay_s", m.load_delay_s, where);
  read(j, "infer_delay_s", m.infer_delay_s, where);
  if (j.contains("label")) {
    std::string token;
    read(j, "label", token, where);
    const auto label = parse_label(token);
    if (!label) config_error(where + ".label", "unknown label '" + token + "'");
    m.label = *label;
  }
  if (j.contains("boxes")) {
    const json& boxes = j.at("boxes");
    if (!boxes.is_array()) config_error(where + ".boxes", "expected an array");
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const std::string w = where + ".boxes[" + std::to_string(i) + "]";
      allow_keys(boxes[i], w, {"box", "confidence"});
      std::vector<double> b;
      read(boxes[i], "box", b, w);
      if (b.size() != 4) config_error(w, "box needs [x0, y0, x1, y1]");
      Detection d{{b[0], b[1], b[2], b[3]}, 0.0};
      read(boxes[i], "confidence", d.confidence, w);
      m.boxes.push_back(d);
    }
  }
  return spec;
}

void parse_backends(const json& j, const std::string& where, const fs::path& base,
                    BackendSpecs& specs) {
  allow_keys(j, where, {"detector", "depth", "classifier"});
  if (j.contains("detector")) specs.detector = parse_backend(j.at("detector"), where + ".detector", base);
  if (j.contains("depth")) specs.depth = parse_backend(j.at("depth"), where + ".depth", base);
  if (j.contains("classifier")) {
    specs.classifier = parse_backend(j.at("classifier"), where + ".classifier", base);
  }
}

json backend_json(const BackendSpec& s) {
  if (s.kind == BackendKind::graph_file) return {{"kind", "graph_file"}, {"path", s.path.string()}};
  const MockParams& m = s.mock;
  json boxes = json::array();
  for (const Detection& d : m.boxes) {
    boxes.push_back({{"box", {d.box.x0, d.box.y0, d.box.x1, d.box.y1}}, {"confidence", d.confidence}});
  }
  return {{"kind", "mock"},          {"mode", m.mode},
          {"boxes", boxes},          {"luma_threshold", m.luma_threshold},
          {"confidence", m.confidence}, {"label", std::string(to_string(m.label))},
          {"peak", m.peak},          {"load_delay_s", m.load_delay_s},
          {"infer_delay_s", m.infer_delay_s}};
}

json backends_json(const BackendSpecs& specs) {
  json j = json::object();
  if (specs.detector) j["detector"] = backend_json(*specs.detector);
  if (specs.depth) j["depth"] = backend_json(*specs.depth);
  if (specs.classifier) j["classifier"] = backend_json(*specs.classifier);
  return j;
}

BackendSpecs merged(const BackendSpecs& base, const BackendSpecs& over) {
  BackendSpecs out = base;
  if (over.detector) out.detector = over.detector;
  if (over.depth) out.depth = over.depth;
  if (over.classifier) out.classifier = over.classifier;
  return out;
}

// --- command plumbing ------------------------------------------------------

CommandOutcome failure(const Error& e) {
  CommandOutcome o;
  o.exit_code = exit_code_for(e.code());
  o.code = e.code();
  o.message = e.what();
  spdlog::debug("{}", o.message);
  return o;
}

ApproachId require_approach(const RunConfig& c) {
  if (!c.approach) throw Error(ErrorCode::config, "no approach configured (use --approach)");
  return *c.approach;
}

struct LoadedManifest {
  fs::path path;
  std::vector<ManifestEntry> entries;
};

LoadedManifest open_manifest(const RunConfig& c) {
  if (c.manifest.empty()) throw Error(ErrorCode::config, "no manifest configured (use --manifest)");
  try {
    return {c.manifest, read_manifest(c.manifest)};
  } catch (const Error& e) {
    throw Error(ErrorCode::config, e.what());
  }
}

std::vector<BatchItem> batch_items(const LoadedManifest& m) {
  std::vector<BatchItem> items;
  items.reserve(m.entries.size());
  for (const ManifestEntry& e : m.entries) {
    items.push_back({e.frame_id, [path = resolve_frame_path(m.path, e)] { return load_frame(path); }});
  }
  return items;
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text).flush()) throw Error(ErrorCode::io, "cannot write " + path.string());
}

// File-system safe, collision-free stems for per-frame PNGs.
class StemAllocator {
 public:
  std::string next(const std::string& frame_id) {
    std::string s;
    for (char c : frame_id) {
      const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                      c == '-' || c == '_' || c == '.';
      s += ok ? c : '_';
    }
    if (s.empty() || s.front() == '.') s.insert(s.begin(), '_');
    std::string candidate = s;
    for (int n = 1; !used_.insert(candidate).second; ++n) candidate = s + "~" + std::to_string(n);
    return candidate;
  }

 private:
  std::set<std::string> used_;
};

struct BatchRun {
  RunReport report;
  std::size_t failures = 0;
};

BatchRun run_manifest(const RunConfig& c, ApproachId approach, const LoadedManifest& m) {
  const auto items = batch_items(m);
  const BackendSpecs specs = c.backends;
  const SelectionConfig sel = c.selection;
  const auto entries = run_batch(items, approach, [&] { return load_backends(specs, approach, sel); },
                                 sel, {c.workers, c.fail_fast});
  BatchRun run;
  run.report.config = c.snapshot();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (const auto* r = std::get_if<FrameResult>(&entries[i])) {
      run.report.results.push_back(*r);
      run.report.truths.push_back(m.entries[i].label);
    } else {
      const auto& err = std::get<FrameError>(entries[i]);
      spdlog::warn("frame '{}' failed in stage {}: {}", err.frame_id, err.stage, err.message);
      run.report.errors.push_back(err);
      ++run.failures;
    }
  }
  return run;
}

template <typename Body>
CommandOutcome guarded(const char* name, Body&& body) {
  try {
    return body();
  } catch (const StageError& e) {
    // fail-fast abort on a per-frame failure
    CommandOutcome o;
    o.exit_code = 1;
    o.failures = 1;
    o.message = e.what();
    spdlog::debug("{}: {}", name, o.message);
    return o;
  } catch (const Error& e) {
    return failure(e);
  } catch (const std::exception& e) {
    return failure(Error(ErrorCode::internal, e.what()));
  }
}

}  // namespace

// --- RunConfig ---------------------------------------------------------------

void RunConfig::validate() const {
  selection.validate();
  waitt.validate();
  timing.validate();
  if (workers < 1) throw Error(ErrorCode::config, "workers must be at least 1");
  auto check_accuracy = [](const std::optional<double>& a) {
    if (a && !(*a >= 0.0 && *a <= 1.0)) {
      throw Error(ErrorCode::config, "supplied accuracy must lie in [0,1]");
    }
  };
  auto check_time = [](const std::optional<double>& t) {
    if (t && !(*t >= 0.0)) throw Error(ErrorCode::config, "forced timings must be >= 0");
  };
  check_accuracy(supplied_accuracy);
  for (const BenchApproachConfig& b : bench) {
    check_accuracy(b.supplied_accuracy);
    check_time(b.forced_cs1_s);
    check_time(b.forced_cs10_s);
    check_time(b.forced_avg_iit_s);
  }
}

json RunConfig::snapshot() const {
  json j;
  j["approach"] = approach ? json(to_string(*approach)) : json(nullptr);
  j["manifest"] = manifest.string();
  j["workers"] = workers;
  j["fail_fast"] = fail_fast;
  j["backends"] = backends_json(backends);
  j["selection"] = {{"conf_weight", selection.conf_weight},
                    {"area_weight", selection.area_weight},
                    {"min_area_fraction", selection.min_area_fraction},
                    {"fallback_scale", selection.fallback_scale},
                    {"enlarge_max", selection.enlarge_max},
                    {"enlarge_min", selection.enlarge_min},
                    {"detector_conf_threshold", selection.detector_conf_threshold}};
  j["waitt"] = {{"alpha", waitt.alpha}, {"gamma", waitt.gamma}};
  j["timing"] = {{"warm_samples", timing.warm_samples}, {"repetitions", timing.repetitions}};
  json entries = json::array();
  for (const BenchApproachConfig& b : bench) {
    json e = {{"approach", to_string(b.approach)}, {"backends", backends_json(b.backends)}};
    if (b.supplied_accuracy) e["supplied_accuracy"] = *b.supplied_accuracy;
    if (b.forced_cs1_s) e["forced_cs1_s"] = *b.forced_cs1_s;
    if (b.forced_cs10_s) e["forced_cs10_s"] = *b.forced_cs10_s;
    if (b.forced_avg_iit_s) e["forced_avg_iit_s"] = *b.forced_avg_iit_s;
    entries.push_back(e);
  }
  j["bench"] = {{"approaches", entries}};
  if (supplied_accuracy) j["bench"]["supplied_accuracy"] = *supplied_accuracy;
  return j;
}

RunConfig parse_config(const json& doc, const fs::path& base_dir) {
  const std::string root = "config";
  allow_keys(doc, root, {"approach", "manifest", "output_dir", "workers", "fail_fast", "backends",
                         "selection", "waitt", "timing", "bench"});
  RunConfig c;
  if (doc.contains("approach")) c.approach = approach_from(doc.at("approach"), root + ".approach");
  std::string path;
  if (doc.contains("manifest")) {
    read(doc, "manifest", path, root);
    c.manifest = resolve(base_dir, path);
  }
  if (doc.contains("output_dir")) {
    read(doc, "output_dir", path, root);
    c.output_dir = resolve(base_dir, path);
  }
  read(doc, "workers", c.workers, root);
  read(doc, "fail_fast", c.fail_fast, root);
  if (doc.contains("backends")) parse_backends(doc.at("backends"), root + ".backends", base_dir, c.backends);
  if (doc.contains("selection")) {
    const json& s = doc.at("selection");
    const std::string w = root + ".selection";
    allow_keys(s, w, {"conf_weight", "area_weight", "min_area_fraction", "fallback_scale",
                      "enlarge_max", "enlarge_min", "detector_conf_threshold"});
    read(s, "conf_weight", c.selection.conf_weight, w);
    read(s, "area_weight", c.selection.area_weight, w);
    read(s, "min_area_fraction", c.selection.min_area_fraction, w);
    read(s, "fallback_scale", c.selection.fallback_scale, w);
    read(s, "enlarge_max", c.selection.enlarge_max, w);
    read(s, "enlarge_min", c.selection.enlarge_min, w);
    read(s, "detector_conf_threshold", c.selection.detector_conf_threshold, w);
  }
  if (doc.contains("waitt")) {
    const json& s = doc.at("waitt");
    allow_keys(s, root + ".waitt", {"alpha", "gamma"});
    read(s, "alpha", c.waitt.alpha, root + ".waitt");
    read(s, "gamma", c.waitt.gamma, root + ".waitt");
  }
  if (doc.contains("timing")) {
    const json& s = doc.at("timing");
    allow_keys(s, root + ".timing", {"warm_samples", "repetitions"});
    read(s, "warm_samples", c.timing.warm_samples, root + ".timing");
    read(s, "repetitions", c.timing.repetitions, root + ".timing");
  }
  if (doc.contains("bench")) {
    const json& b = doc.at("bench");
    const std::string w = root + ".bench";
    allow_keys(b, w, {"approaches", "supplied_accuracy"});
    read(b, "supplied_accuracy", c.supplied_accuracy, w);
    if (b.contains("approaches")) {
      const json& list = b.at("approaches");
      if (!list.is_array()) config_error(w + ".approaches", "expected an array");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string wi = w + ".approaches[" + std::to_string(i) + "]";
        const json& e = list[i];
        BenchApproachConfig entry;
        if (e.is_string()) {
          entry.approach = approach_from(e, wi);
        } else {
          allow_keys(e, wi, {"approach", "backends", "supplied_accuracy", "forced_cs1_s",
                             "forced_cs10_s", "forced_avg_iit_s"});
          if (!e.contains("approach")) config_error(wi, "missing approach");
          entry.approach = approach_from(e.at("approach"), wi + ".approach");
          if (e.contains("backends")) parse_backends(e.at("backends"), wi + ".backends", base_dir, entry.backends);
          read(e, "supplied_accuracy", entry.supplied_accuracy, wi);
          read(e, "forced_cs1_s", entry.forced_cs1_s, wi);
          read(e, "forced_cs10_s", entry.forced_cs10_s, wi);
          read(e, "forced_avg_iit_s", entry.forced_avg_iit_s, wi);
        }
        c.bench.push_back(std::move(entry));
      }
    }
  }
  c.validate();
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::config, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::config, path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

void use_mock_backends(RunConfig& config) {
  auto mock = [](std::optional<BackendSpec>& spec, MockParams params) {
    if (spec && spec->kind == BackendKind::mock) return;
    spec = BackendSpec{BackendKind::mock, {}, std::move(params)};
  };
  MockParams det;
  det.mode = "bright_region";
  MockParams depth;
  depth.mode = "luminance";
  MockParams cls;
  cls.mode = "mean_red";
  mock(config.backends.detector, det);
  mock(config.backends.depth, depth);
  mock(config.backends.classifier, cls);
  for (BenchApproachConfig& b : config.bench) {
    for (auto* s : {&b.backends.detector, &b.backends.depth, &b.backends.classifier}) {
      if (*s && (*s)->kind != BackendKind::mock) s->reset();
    }
  }
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::argument:
    case ErrorCode::bounds:
    case ErrorCode::parse:
    case ErrorCode::config:
    case ErrorCode::missing_backend:
    case ErrorCode::domain:
      return 2;
    case ErrorCode::data:
      return 1;
    case ErrorCode::io:
    case ErrorCode::backend_load:
    case ErrorCode::shape_mismatch:
    case ErrorCode::unsupported_operator:
    case ErrorCode::backend_failure:
    case ErrorCode::internal:
      return 3;
  }
  return 3;
}

// --- commands ----------------------------------------------------------------

CommandOutcome cmd_classify(const RunConfig& config) {
  return guarded("classify", [&] {
    config.validate();
    const ApproachId approach = require_approach(config);
    const LoadedManifest m = open_manifest(config);
    BatchRun run = run_manifest(config, approach, m);
    make_dir(config.output_dir);
    CommandOutcome o;
    o.files.push_back(write_results_csv(run.report, config.output_dir));
    if (!run.report.errors.empty()) o.files.push_back(write_errors_csv(run.report, config.output_dir));
    o.frames = run.report.results.size();
    o.failures = run.failures;
    o.exit_code = run.failures ? 1 : 0;
    o.message = std::to_string(o.frames) + " frames classified, " + std::to_string(o.failures) + " failed";
    return o;
  });
}

CommandOutcome cmd_eval(const RunConfig& config) {
  return guarded("eval", [&] {
    config.validate();
    const ApproachId approach = require_approach(config);
    const LoadedManifest m = open_manifest(config);
    std::string unlabeled;
    for (const ManifestEntry& e : m.entries) {
      if (!e.label) unlabeled += (unlabeled.empty() ? "" : ", ") + e.frame_id;
    }
    if (!unlabeled.empty()) throw Error(ErrorCode::config, "unlabeled manifest entries: " + unlabeled);

    BatchRun run = run_manifest(config, approach, m);
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < run.report.results.size(); ++i) {
      cm.accumulate(*run.report.truths[i], run.report.results[i].predicted);
    }
    run.report.confusion = cm;

    CommandOutcome o;
    o.files = write_report(run.report, config.output_dir);
    o.frames = run.report.results.size();
    o.failures = run.failures;
    o.exit_code = run.failures ? 1 : 0;
    o.message = cm.total() ? "accuracy " + format_number(summarize(cm).accuracy) + " over " +
                                 std::to_string(cm.total()) + " frames"
                           : "no frames evaluated";
    return o;
  });
}

CommandOutcome cmd_bench(const RunConfig& config) {
  return guarded("bench", [&] {
    config.validate();
    std::vector<BenchPlan> plans;
    auto plan_for = [&](const BenchApproachConfig& b) {
      BenchPlan p;
      p.approach = b.approach;
      p.specs = merged(config.backends, b.backends);
      p.supplied_accuracy = b.supplied_accuracy ? b.supplied_accuracy : config.supplied_accuracy;
      p.forced_cs1_s = b.forced_cs1_s;
      p.forced_cs10_s = b.forced_cs10_s;
      p.forced_avg_iit_s = b.forced_avg_iit_s;
      return p;
    };
    for (const BenchApproachConfig& b : config.bench) plans.push_back(plan_for(b));
    if (plans.empty() && config.approach) plans.push_back(plan_for({*config.approach, {}, {}, {}, {}, {}}));
    if (plans.empty()) throw Error(ErrorCode::config, "no approaches configured for bench");

    std::vector<LabeledFrame> frames;
    if (!config.manifest.empty()) {
      const LoadedManifest m = open_manifest(config);
      for (const ManifestEntry& e : m.entries) {
        frames.push_back({load_frame(resolve_frame_path(m.path, e)), e.label});
      }
    }

    // Measurements run on this thread only.
    set_deterministic_execution(true);
    RunReport report;
    report.config = config.snapshot();
    report.bench = run_benchmark(plans, config.selection, config.timing, config.waitt, frames);

    CommandOutcome o;
    o.files = write_report(report, config.output_dir);
    o.exit_code = 0;
    o.message = std::to_string(report.bench.size()) + " approaches benchmarked";
    for (const BenchRecord& r : report.bench) {
      spdlog::info("{}", bench_csv_row(r));
    }
    return o;
  });
}

CommandOutcome cmd_extract_patches(const RunConfig& config) {
  return guarded("extract-patches", [&] {
    config.validate();
    const LoadedManifest m = open_manifest(config);
    if (!config.backends.detector) throw Error(ErrorCode::missing_backend, "extract-patches needs a detector backend");
    auto detector = filter_detections(load_detector(*config.backends.detector),
                                      config.selection.detector_conf_threshold);
    const fs::path dir = config.output_dir / "patches";
    make_dir(dir);

    RunReport errors;
    std::string csv = "frame_id,selection_source,x0,y0,x1,y1,selection_score,png\n";
    StemAllocator stems;
    CommandOutcome o;
    for (const ManifestEntry& e : m.entries) {
      const std::string stem = stems.next(e.frame_id);
      std::string stage = "load";
      try {
        const Frame frame = load_frame(resolve_frame_path(m.path, e));
        stage = "detect";
        const auto dets = detector->detect(frame);
        stage = "select";
        const SelectionOutcome sel = select_primary(dets, frame.width(), frame.height(), config.selection);
        stage = "write";
        const fs::path png = dir / (stem + ".png");
        save_png(crop(frame, sel.region), png);
        const PatchRegion& g = sel.region;
        csv += csv_field(e.frame_id) + "," + to_string(sel.source) + "," + std::to_string(g.x0) + "," +
               std::to_string(g.y0) + "," + std::to_string(g.x1) + "," + std::to_string(g.y1) + "," +
               (sel.score ? format_number(*sel.score) : std::string()) + "," +
               csv_field("patches/" + stem + ".png") + "\n";
        ++o.frames;
      } catch (const Error& err) {
        errors.errors.push_back({e.frame_id, stage, err.code(), err.what()});
        if (config.fail_fast) break;
      }
    }
    o.files.push_back(config.output_dir / "selections.csv");
    write_text(o.files.back(), csv);
    if (!errors.errors.empty()) o.files.push_back(write_errors_csv(errors, config.output_dir));
    o.failures = errors.errors.size();
    o.exit_code = o.failures ? 1 : 0;
    o.message = std::to_string(o.frames) + " patches written";
    return o;
  });
}

CommandOutcome cmd_render_depth(const RunConfig& config) {
  return guarded("render-depth", [&] {
    config.validate();
    const LoadedManifest m = open_manifest(config);
    if (!config.backends.depth) throw Error(ErrorCode::missing_backend, "render-depth needs a depth backend");
    auto depth = load_depth(*config.backends.depth);
    const fs::path dir = config.output_dir / "depth";
    make_dir(dir);

    RunReport errors;
    std::string csv = "frame_id,width,height,png\n";
    StemAllocator stems;
    CommandOutcome o;
    for (const ManifestEntry& e : m.entries) {
      const std::string stem = stems.next(e.frame_id);
      std::string stage = "load";
      try {
        const Frame frame = load_frame(resolve_frame_path(m.path, e));
        stage = "depth";
        const DepthMap d = depth->estimate(frame);
        stage = "render";
        const Frame rendered = render_depth(d);
        stage = "write";
        save_png(rendered, dir / (stem + ".png"));
        csv += csv_field(e.frame_id) + "," + std::to_string(rendered.width()) + "," +
               std::to_string(rendered.height()) + "," + csv_field("depth/" + stem + ".png") + "\n";
        ++o.frames;
      } catch (const Error& err) {
        errors.errors.push_back({e.frame_id, stage, err.code(), err.what()});
        if (config.fail_fast) break;
      }
    }
    o.files.push_back(config.output_dir / "depth.csv");
    write_text(o.files.back(), csv);
    if (!errors.errors.empty()) o.files.push_back(write_errors_csv(errors, config.output_dir));
    o.failures = errors.errors.size();
    o.exit_code = o.failures ? 1 : 0;
    o.message = std::to_string(o.frames) + " depth renders written";
    return o;
  });
}

CommandOutcome run_command(const std::string& name, const RunConfig& config) {
  if (name == "classify") return cmd_classify(config);
  if (name == "eval") return cmd_eval(config);
  if (name == "bench") return cmd_bench(config);
  if (name == "extract-patches") return cmd_extract_patches(config);
  if (name == "render-depth") return cmd_render_depth(config);
  return failure(Error(ErrorCode::config, "unknown command '" + name + "'"));
}

void init_logging() {
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("SKILLBENCH_LOG_LEVEL")) {
    level = spdlog::level::from_str(env);
  }
  spdlog::set_level(level);
}

}  // namespace skillbench
