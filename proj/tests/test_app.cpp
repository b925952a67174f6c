#include <doctest.h>

#include <nlohmann/json.hpp>

#include "reference_table.hpp"
#include "skillbench/app.hpp"
#include "skillbench/error.hpp"
#include "test_support.hpp"

using namespace skillbench;
using nlohmann::json;
using skillbench::testing::read_file;
using skillbench::testing::TempDir;

namespace {

RunConfig mock_config(const TempDir& dir, const std::filesystem::path& manifest,
                      ApproachId approach = ApproachId::full_rgb) {
  RunConfig c;
  c.approach = approach;
  c.manifest = manifest;
  c.output_dir = dir / "out";
  use_mock_backends(c);
  return c;
}

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST_CASE("config parsing") {
  TempDir dir("config");
  SUBCASE("defaults carry the published constants") {
    const RunConfig c = parse_config(json::object(), dir.path());
    CHECK(c.selection == SelectionConfig{});
    CHECK(c.selection.conf_weight == 0.6);
    CHECK(c.selection.min_area_fraction == 0.01);
    CHECK(c.waitt.alpha == 1.0);
    CHECK(c.waitt.gamma == 2.0);
    CHECK(c.timing.warm_samples == 100);
    CHECK(c.workers == 1);
  }
  SUBCASE("full document") {
    const json doc = json::parse(R"({
      "approach": "depth_patch",
      "manifest": "data/m.csv",
      "output_dir": "results",
      "workers": 4,
      "fail_fast": true,
      "backends": {
        "detector": {"kind": "mock", "mode": "fixed",
                     "boxes": [{"box": [1, 2, 30, 40], "confidence": 0.8}]},
        "depth": {"kind": "graph_file", "path": "models/depth.onnx"},
        "classifier": {"mode": "constant", "label": "PL", "peak": 0.5}
      },
      "selection": {"detector_conf_threshold": 0.3},
      "waitt": {"gamma": 1.5},
      "timing": {"warm_samples": 7, "repetitions": 1},
      "bench": {"approaches": ["full-rgb", {"approach": "rgb-patch", "supplied_accuracy": 0.7}],
                "supplied_accuracy": 0.5}
    })");
    const RunConfig c = parse_config(doc, dir.path());
    CHECK(c.approach == ApproachId::depth_patch);
    CHECK(c.manifest == dir / "data/m.csv");
    CHECK(c.output_dir == dir / "results");
    CHECK(c.workers == 4);
    CHECK(c.fail_fast);
    REQUIRE(c.backends.detector);
    CHECK(c.backends.detector->mock.boxes == std::vector<Detection>{{{1, 2, 30, 40}, 0.8}});
    CHECK(c.backends.depth->kind == BackendKind::graph_file);
    CHECK(c.backends.depth->path == dir / "models/depth.onnx");
    CHECK(c.backends.classifier->mock.label == SkillLabel::PL);
    CHECK(c.selection.detector_conf_threshold == 0.3);
    CHECK(c.waitt.gamma == 1.5);
    CHECK(c.timing.repetitions == 1);
    REQUIRE(c.bench.size() == 2);
    CHECK(c.bench[1].supplied_accuracy == 0.7);
    CHECK(c.supplied_accuracy == 0.5);

    const json snap = c.snapshot();
    CHECK(snap["approach"] == "depth-patch");
    CHECK_FALSE(snap.contains("output_dir"));
  }
  SUBCASE("rejections") {
    auto code = [&](const char* text) {
      try {
        parse_config(json::parse(text), dir.path());
      } catch (const Error& e) {
        return e.code();
      }
      return ErrorCode::internal;
    };
    CHECK(code(R"({"aproach": "full-rgb"})") == ErrorCode::config);
    CHECK(code(R"({"approach": "sideways"})") == ErrorCode::config);
    CHECK(code(R"({"workers": 0})") == ErrorCode::config);
    CHECK(code(R"({"workers": "two"})") == ErrorCode::config);
    CHECK(code(R"({"selection": {"conf_weight": 0.9}})") == ErrorCode::config);
    CHECK(code(R"({"backends": {"classifier": {"kind": "magic"}}})") == ErrorCode::config);
    CHECK(code(R"({"backends": {"classifier": {"label": "XX"}}})") == ErrorCode::config);
    std::ofstream(dir / "broken.json") << "{";
    CHECK_THROWS_AS(load_config(dir / "broken.json"), Error);
    CHECK_THROWS_AS(load_config(dir / "absent.json"), Error);
  }
  SUBCASE("mock override keeps configured mocks") {
    RunConfig c;
    BackendSpec graph;
    graph.kind = BackendKind::graph_file;
    graph.path = "x.onnx";
    c.backends.detector = graph;
    c.backends.classifier = testing::mock("constant");
    use_mock_backends(c);
    CHECK(c.backends.detector->mock.mode == "bright_region");
    CHECK(c.backends.depth->mock.mode == "luminance");
    CHECK(c.backends.classifier->mock.mode == "constant");
  }
}

TEST_CASE("exit codes") {
  CHECK(exit_code_for(ErrorCode::config) == 2);
  CHECK(exit_code_for(ErrorCode::parse) == 2);
  CHECK(exit_code_for(ErrorCode::missing_backend) == 2);
  CHECK(exit_code_for(ErrorCode::data) == 1);
  CHECK(exit_code_for(ErrorCode::backend_load) == 3);
  CHECK(exit_code_for(ErrorCode::io) == 3);
}

TEST_CASE("classify") {
  TempDir dir("classify");
  const auto manifest = testing::write_synthetic_dataset(dir / "data", 5, false);
  SUBCASE("five frames") {
    const CommandOutcome o = cmd_classify(mock_config(dir, manifest));
    CHECK(o.exit_code == 0);
    CHECK(o.frames == 5);
    const std::string results = read_file(dir / "out/results.csv");
    CHECK(line_count(results) == 6);
    CHECK(results.find("frame_0003,full-rgb,IC,,") != std::string::npos);
    CHECK_FALSE(std::filesystem::exists(dir / "out/errors.csv"));
  }
  SUBCASE("bad manifest path") {
    const CommandOutcome o = cmd_classify(mock_config(dir, dir / "nope.csv"));
    CHECK(o.exit_code == 2);
    CHECK(o.message.find("nope.csv") != std::string::npos);
  }
  SUBCASE("no approach") {
    RunConfig c = mock_config(dir, manifest);
    c.approach.reset();
    CHECK(cmd_classify(c).exit_code == 2);
  }
  SUBCASE("one unreadable frame") {
    std::ofstream(dir / "data/frames/frame_0002.png", std::ios::trunc) << "garbage";
    const CommandOutcome o = cmd_classify(mock_config(dir, manifest));
    CHECK(o.exit_code == 1);
    CHECK(o.frames == 4);
    CHECK(o.failures == 1);
    CHECK(line_count(read_file(dir / "out/results.csv")) == 5);
    const std::string errors = read_file(dir / "out/errors.csv");
    CHECK(line_count(errors) == 2);
    CHECK(errors.find("frame_0002,load,data,") != std::string::npos);

    RunConfig fast = mock_config(dir, manifest);
    fast.fail_fast = true;
    CHECK(cmd_classify(fast).exit_code >= 1);
  }
  SUBCASE("missing model file is an environment error") {
    RunConfig c = mock_config(dir, manifest);
    c.backends.classifier = BackendSpec{BackendKind::graph_file, dir / "absent.onnx", {}};
    CHECK(cmd_classify(c).exit_code == 3);
  }
  SUBCASE("graph classifier") {
    RunConfig c = mock_config(dir, manifest);
    c.backends.classifier = BackendSpec{BackendKind::graph_file, testing::fixture("classifier.onnx"), {}};
    CHECK(cmd_classify(c).exit_code == 0);
    c.backends.classifier->path = testing::fixture("classifier_9.onnx");
    CHECK(cmd_classify(c).exit_code == 3);
  }
}

TEST_CASE("eval") {
  TempDir dir("eval");
  SUBCASE("oracle classifier") {
    const auto manifest = testing::write_synthetic_dataset(dir / "data", 20);
    for (ApproachId a : {ApproachId::full_rgb, ApproachId::rgb_patch}) {
      const CommandOutcome o = cmd_eval(mock_config(dir, manifest, a));
      CHECK(o.exit_code == 0);
      CHECK(o.files.size() == 4);
      const json summary = json::parse(read_file(dir / "out/summary.json"));
      CHECK(summary["metrics"]["accuracy"] == 1.0);
    }
    // Uniform frames have no bright region, so every patch is a fallback.
    const json summary = json::parse(read_file(dir / "out/summary.json"));
    CHECK(summary["selection"]["fallback_fraction"] == 1.0);
  }
  SUBCASE("always NONE") {
    const auto manifest = testing::write_synthetic_dataset(dir / "data", 30);
    RunConfig c = mock_config(dir, manifest);
    c.backends.classifier = testing::mock("constant");
    CHECK(cmd_eval(c).exit_code == 0);
    const json summary = json::parse(read_file(dir / "out/summary.json"));
    CHECK(summary["metrics"]["accuracy"].get<double>() == doctest::Approx(0.1));
  }
  SUBCASE("unlabeled entries") {
    const auto manifest = testing::write_synthetic_dataset(dir / "data", 4);
    std::ofstream(manifest, std::ios::app) << "extra,frames/frame_0000.png,,\n";
    const CommandOutcome o = cmd_eval(mock_config(dir, manifest));
    CHECK(o.exit_code == 2);
    CHECK(o.message.find("extra") != std::string::npos);
  }
  SUBCASE("repeat runs are byte-identical") {
    const auto manifest = testing::write_synthetic_dataset(dir / "data", 12);
    RunConfig a = mock_config(dir, manifest, ApproachId::depth_patch);
    a.workers = 3;
    RunConfig b = a;
    b.output_dir = dir / "out2";
    b.workers = 1;
    REQUIRE(cmd_eval(a).exit_code == 0);
    REQUIRE(cmd_eval(b).exit_code == 0);
    CHECK(read_file(dir / "out/summary.json") != read_file(dir / "out2/summary.json"));  // workers differ
    b.workers = 3;
    REQUIRE(cmd_eval(b).exit_code == 0);
    for (const char* f : {"results.csv", "confusion.csv", "bench.csv", "summary.json"}) {
      CHECK(read_file(dir / "out" / f) == read_file(dir / "out2" / f));
    }
  }
}

TEST_CASE("bench") {
  TempDir dir("bench");
  SUBCASE("published rows with forced timings") {
    RunConfig c;
    c.output_dir = dir / "out";
    use_mock_backends(c);
    for (const auto& row : testing::kReferenceTable) {
      c.bench.push_back({row.approach, {}, row.accuracy, row.cs1_s, row.cs10_s, row.avg_iit_s});
    }
    const CommandOutcome o = cmd_bench(c);
    REQUIRE(o.exit_code == 0);
    const std::string csv = read_file(dir / "out/bench.csv");
    CHECK(line_count(csv) == 5);
    CHECK(csv.find("full-rgb,0.726,3.59,3.6,0.001,2.64963,supplied,supplied") != std::string::npos);
    const json summary = json::parse(read_file(dir / "out/summary.json"));
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(std::abs(summary["bench"][i]["waitt"].get<double>() - testing::kReferenceTable[i].waitt) <=
            0.005);
    }
  }
  SUBCASE("measured mocks with distinct delays") {
    const auto manifest = testing::write_synthetic_dataset(dir / "data", 10, true, 16, 12);
    RunConfig c = mock_config(dir, manifest);
    c.timing = {5, 1};
    const double delays[] = {0.001, 0.002, 0.003, 0.004};
    for (std::size_t i = 0; i < 4; ++i) {
      BenchApproachConfig b{kAllApproaches[i], {}, std::nullopt, {}, {}, {}};
      BackendSpec cls = testing::mock("mean_red");
      cls.mock.infer_delay_s = delays[i];
      b.backends.classifier = cls;
      c.bench.push_back(b);
    }
    REQUIRE(cmd_bench(c).exit_code == 0);
    const json summary = json::parse(read_file(dir / "out/summary.json"));
    REQUIRE(summary["bench"].size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      const json& r = summary["bench"][i];
      CHECK(r["approach"] == to_string(kAllApproaches[i]));
      CHECK(r["accuracy_source"] == "measured");
      const double expect = compute_waitt(r["accuracy"].get<double>(), r["avg_iit_s"].get<double>());
      CHECK(r["waitt"].get<double>() == doctest::Approx(expect).epsilon(1e-5));
    }
  }
  SUBCASE("nothing to benchmark") {
    RunConfig c;
    c.output_dir = dir / "out";
    CHECK(cmd_bench(c).exit_code == 2);
  }
}

TEST_CASE("extract-patches and render-depth") {
  TempDir dir("patches");
  std::filesystem::create_directories(dir / "data");
  std::mt19937_64 rng(6);
  save_png(testing::random_frame(rng, 960, 540), dir / "data/wide.png");
  Frame gray(40, 30, Rgb{90, 90, 90});
  save_png(gray, dir / "data/gray.png");
  write_manifest(dir / "data/m.csv", {{"wide", "wide.png", std::nullopt, ""},
                                      {"gray/1", "gray.png", std::nullopt, ""}});

  SUBCASE("fallback crop when nothing is detected") {
    RunConfig c = mock_config(dir, dir / "data/m.csv");
    c.backends.detector = testing::mock("none");
    const CommandOutcome o = cmd_extract_patches(c);
    CHECK(o.exit_code == 0);
    const Frame patch = load_frame(dir / "out/patches/wide.png");
    CHECK(patch.width() == 768);
    CHECK(patch.height() == 432);
    CHECK(patch == crop(load_frame(dir / "data/wide.png"), {96, 54, 864, 486}));
    const std::string csv = read_file(dir / "out/selections.csv");
    CHECK(csv.find("wide,fallback_center_crop,96,54,864,486,,patches/wide.png") != std::string::npos);
    CHECK(std::filesystem::exists(dir / "out/patches/gray_1.png"));
  }
  SUBCASE("one fixed box is enlarged and clipped") {
    RunConfig c = mock_config(dir, dir / "data/m.csv");
    BackendSpec det = testing::mock("fixed");
    det.mock.boxes = {{{900, 400, 960, 540}, 0.9}};  // 60x140 against the right edge
    c.backends.detector = det;
    REQUIRE(cmd_extract_patches(c).exit_code == 0);
    const PatchRegion expect = enlarge_box(Box{900, 400, 960, 540}, 960, 540, c.selection);
    CHECK(expect.x1 == 960);
    CHECK(expect.y1 == 540);
    const Frame patch = load_frame(dir / "out/patches/wide.png");
    CHECK(patch == crop(load_frame(dir / "data/wide.png"), expect));
  }
  SUBCASE("constant depth renders LUT[0]") {
    RunConfig c = mock_config(dir, dir / "data/m.csv");
    c.backends.depth = testing::mock("constant");
    REQUIRE(cmd_render_depth(c).exit_code == 0);
    CHECK(load_frame(dir / "out/depth/gray_1.png") == Frame(40, 30, colormap_lut()[0]));
    CHECK(read_file(dir / "out/depth.csv") ==
          "frame_id,width,height,png\nwide,960,540,depth/wide.png\ngray/1,40,30,depth/gray_1.png\n");
  }
  SUBCASE("unknown command") {
    CHECK(run_command("train", RunConfig{}).exit_code == 2);
  }
}
