#include <doctest.h>

#include <nlohmann/json.hpp>
#include <random>

#include "skillbench/dataset_io.hpp"
#include "skillbench/error.hpp"
#include "test_support.hpp"

using namespace skillbench;
using skillbench::testing::read_file;
using skillbench::testing::TempDir;

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::internal;
}

FrameResult result(std::string id, SkillLabel predicted, std::optional<SelectionSource> source) {
  FrameResult r;
  r.frame_id = std::move(id);
  r.approach = source ? ApproachId::rgb_patch : ApproachId::full_rgb;
  r.scores = ClassScores::peaked(predicted);
  r.predicted = predicted;
  if (source) {
    SelectionOutcome s;
    s.source = *source;
    s.region = {1, 2, 30, 40};
    if (*source == SelectionSource::detected) {
      s.score = 0.5;
      s.chosen = 0;
    }
    r.selection = s;
  }
  r.stage_timings = {{"classify", 0.123}};
  return r;
}

}  // namespace

TEST_CASE("read_manifest") {
  TempDir dir("manifest");
  SUBCASE("well-formed") {
    write_text(dir / "m.csv",
               "frame_id,path,label,video_id\n"
               "a,frames/a.png,PL,v1\n"
               "b,/abs/b.png,,\n"
               "\"c,1\",\"odd \"\"name\"\".png\",NONE,v2\n");
    const auto m = read_manifest(dir / "m.csv");
    REQUIRE(m.size() == 3);
    CHECK(m[0] == ManifestEntry{"a", "frames/a.png", SkillLabel::PL, "v1"});
    CHECK_FALSE(m[1].label);
    CHECK(m[1].video_id.empty());
    CHECK(m[2].frame_id == "c,1");
    CHECK(m[2].path == "odd \"name\".png");
    CHECK(resolve_frame_path(dir / "m.csv", m[0]) == dir / "frames/a.png");
    CHECK(resolve_frame_path(dir / "m.csv", m[1]) == "/abs/b.png");
  }
  SUBCASE("header only") {
    write_text(dir / "m.csv", "frame_id,path,label,video_id\n");
    CHECK(read_manifest(dir / "m.csv").empty());
  }
  SUBCASE("CRLF and blank lines") {
    write_text(dir / "m.csv", "frame_id,path,label,video_id\r\na,a.png,FL,\r\n\r\nb,b.png,BL,\r\n");
    CHECK(read_manifest(dir / "m.csv").size() == 2);
  }
  SUBCASE("unknown label names the line") {
    write_text(dir / "m.csv", "frame_id,path,label,video_id\na,a.png,PL,\nb,b.png,XYZ,\n");
    try {
      read_manifest(dir / "m.csv");
      FAIL("expected parse error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::parse);
      const std::string msg = e.what();
      CHECK(msg.find(":3:") != std::string::npos);
      CHECK(msg.find("XYZ") != std::string::npos);
    }
  }
  SUBCASE("other errors") {
    write_text(dir / "dup.csv", "frame_id,path,label,video_id\na,a.png,,\na,b.png,,\n");
    CHECK(code_of([&] { read_manifest(dir / "dup.csv"); }) == ErrorCode::parse);
    write_text(dir / "hdr.csv", "id,path,label\n");
    CHECK(code_of([&] { read_manifest(dir / "hdr.csv"); }) == ErrorCode::parse);
    write_text(dir / "cols.csv", "frame_id,path,label,video_id\na,a.png\n");
    CHECK(code_of([&] { read_manifest(dir / "cols.csv"); }) == ErrorCode::parse);
    write_text(dir / "quote.csv", "frame_id,path,label,video_id\n\"a,a.png,,\n");
    CHECK(code_of([&] { read_manifest(dir / "quote.csv"); }) == ErrorCode::parse);
    CHECK(code_of([&] { read_manifest(dir / "absent.csv"); }) == ErrorCode::io);
  }
}

TEST_CASE("manifest round trip") {
  TempDir dir("roundtrip");
  std::mt19937_64 rng(12);
  const std::string alphabet = "abcXYZ019 ,\"_-./";
  auto token = [&](int min_len) {
    std::string s;
    const int n = std::uniform_int_distribution<int>(min_len, 12)(rng);
    for (int i = 0; i < n; ++i) {
      s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    }
    return s;
  };
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ManifestEntry> entries;
    const int n = std::uniform_int_distribution<int>(0, 20)(rng);
    for (int i = 0; i < n; ++i) {
      ManifestEntry e{std::to_string(i) + token(0), token(1), std::nullopt, token(0)};
      if (std::bernoulli_distribution(0.7)(rng)) {
        e.label = kAllLabels[std::uniform_int_distribution<std::size_t>(0, 9)(rng)];
      }
      if (e.path.string().find_first_not_of(' ') == std::string::npos) e.path = "p.png";
      entries.push_back(e);
    }
    write_manifest(dir / "m.csv", entries);
    REQUIRE(read_manifest(dir / "m.csv") == entries);
  }
}

TEST_CASE("frame files") {
  TempDir dir("frames");
  std::mt19937_64 rng(13);
  const Frame f = testing::random_frame(rng, 37, 21);
  save_png(f, dir / "f.png");
  CHECK(load_frame(dir / "f.png") == f);
  write_text(dir / "junk.png", "not an image");
  CHECK(code_of([&] { load_frame(dir / "junk.png"); }) == ErrorCode::data);
  CHECK(code_of([&] { load_frame(dir / "missing.png"); }) == ErrorCode::io);
}

TEST_CASE("csv_field quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
}

TEST_CASE("write_report") {
  TempDir dir("report");
  SUBCASE("ten labeled frames") {
    RunReport rep;
    rep.config = {{"approach", "full-rgb"}};
    rep.confusion = ConfusionMatrix{};
    for (int i = 0; i < 10; ++i) {
      const SkillLabel l = kAllLabels[static_cast<std::size_t>(i)];
      rep.results.push_back(result("f" + std::to_string(i), l, std::nullopt));
      rep.truths.push_back(l);
      rep.confusion->accumulate(l, l);
    }
    const auto files = write_report(rep, dir.path());
    CHECK(files.size() == 4);
    for (const auto& f : files) CHECK(std::filesystem::exists(f));

    const std::string confusion = read_file(dir / "confusion.csv");
    CHECK(confusion.rfind("truth,BL,FL,FLAG,IC,MAL,OAFL,OAHS,PL,VSIT,NONE\n", 0) == 0);
    std::uint64_t total = 0;
    std::istringstream rows(confusion);
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line)) {
      std::istringstream cells(line);
      std::string cell;
      std::getline(cells, cell, ',');
      while (std::getline(cells, cell, ',')) total += std::stoull(cell);
    }
    CHECK(total == 10);

    const auto summary = nlohmann::json::parse(read_file(dir / "summary.json"));
    CHECK(summary["metrics"]["accuracy"] == 1.0);
    CHECK(summary["frames"] == 10);
    CHECK(summary["config"]["approach"] == "full-rgb");

    const std::string results = read_file(dir / "results.csv");
    CHECK(results.rfind("frame_id,approach,predicted,truth,selection_source,x0,y0,x1,y1,"
                        "selection_score,p_BL,p_FL,p_FLAG,p_IC,p_MAL,p_OAFL,p_OAHS,p_PL,p_VSIT,"
                        "p_NONE\n",
                        0) == 0);
    CHECK(results.find("f7,full-rgb,PL,PL,,,,,,,0.01,") != std::string::npos);

    // Writing the same report again gives the same bytes.
    TempDir again("report2");
    write_report(rep, again.path());
    for (const char* name : {"results.csv", "confusion.csv", "bench.csv", "summary.json"}) {
      CHECK(read_file(dir / name) == read_file(again / name));
    }
  }
  SUBCASE("fallback fraction") {
    RunReport rep;
    for (int i = 0; i < 40; ++i) {
      rep.results.push_back(result("f" + std::to_string(i), SkillLabel::FL,
                                   i == 17 ? SelectionSource::fallback_center_crop
                                           : SelectionSource::detected));
    }
    CHECK(rep.selection_stats().fallback_fraction() == 0.025);
    write_report(rep, dir.path());
    const auto summary = nlohmann::json::parse(read_file(dir / "summary.json"));
    CHECK(summary["selection"]["fallback_fraction"] == 0.025);
    CHECK(summary["selection"]["fallback_count"] == 1);
    CHECK(summary["metrics"].is_null());
    const std::string results = read_file(dir / "results.csv");
    CHECK(results.find("f17,rgb-patch,FL,,fallback_center_crop,1,2,30,40,,") != std::string::npos);
    CHECK(results.find("f16,rgb-patch,FL,,detected,1,2,30,40,0.5,") != std::string::npos);
  }
  SUBCASE("empty run writes headers only") {
    write_report(RunReport{}, dir.path());
    for (const char* name : {"results.csv", "confusion.csv", "bench.csv"}) {
      const std::string text = read_file(dir / name);
      CHECK(std::count(text.begin(), text.end(), '\n') == 1);
    }
    CHECK_FALSE(std::filesystem::exists(dir / "errors.csv"));
  }
  SUBCASE("errors file") {
    RunReport rep;
    rep.errors.push_back({"bad, frame", "load", ErrorCode::io, "cannot decode"});
    const auto files = write_report(rep, dir.path());
    CHECK(files.size() == 5);
    CHECK(read_file(dir / "errors.csv") ==
          "frame_id,stage,code,message\n\"bad, frame\",load,io,cannot decode\n");
  }
}
