#include "skillbench/dataset_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "skillbench/error.hpp"

namespace skillbench {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct CsvRecord {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

// RFC 4180 reader. Accepts LF and CRLF line endings and quoted fields
// spanning lines.
std::vector<CsvRecord> parse_csv(const std::string& text, const std::string& name) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  std::size_t line = 1;
  current.line = line;
  bool quoted = false;
  bool field_started = false;
  auto end_field = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(current));
    current = CsvRecord{};
    current.line = line;
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started || !field.empty()) {
          throw Error(ErrorCode::parse, name + ":" + std::to_string(line) + ": stray quote");
        }
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        ++line;
        end_record();
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) throw Error(ErrorCode::parse, name + ": unterminated quoted field");
  if (field_started || !field.empty() || !current.fields.empty()) end_record();
  return records;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << text;
  if (!out.flush()) throw Error(ErrorCode::io, "write failed for " + path.string());
}

std::string join_csv(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  return line + "\n";
}

std::string results_header() {
  std::string h = "frame_id,approach,predicted,truth,selection_source,x0,y0,x1,y1,selection_score";
  for (SkillLabel l : kAllLabels) h += ",p_" + std::string(to_string(l));
  return h + "\n";
}

double six_digits(double v) { return std::stod(format_number(v)); }

json metrics_json(const MetricsSummary& m) {
  json per_class = json::object();
  for (SkillLabel l : kAllLabels) {
    const ClassMetrics& c = m.per_class[index_of(l)];
    per_class[std::string(to_string(l))] = {{"support", c.support},
                                            {"precision", six_digits(c.precision)},
                                            {"recall", six_digits(c.recall)},
                                            {"f1", six_digits(c.f1)}};
  }
  return {{"macro_precision", six_digits(m.precision)},
          {"macro_recall", six_digits(m.recall)},
          {"macro_f1", six_digits(m.f1)},
          {"accuracy", six_digits(m.accuracy)},
          {"per_class", per_class}};
}

json bench_json(const BenchRecord& r) {
  return {{"approach", to_string(r.approach)},
          {"accuracy", six_digits(r.accuracy)},
          {"cs1_iit_s", six_digits(r.cs1_s)},
          {"cs10_iit_s", six_digits(r.cs10_s)},
          {"avg_iit_s", six_digits(r.avg_iit_s)},
          {"waitt", six_digits(r.waitt)},
          {"alpha", six_digits(r.params.alpha)},
          {"gamma", six_digits(r.params.gamma)},
          {"accuracy_source", to_string(r.accuracy_source)},
          {"timing_source", to_string(r.timing_source)}};
}

}  // namespace

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::io, "manifest not found: " + path.string());
  const auto records = parse_csv(read_file(path), path.string());
  if (records.empty()) throw Error(ErrorCode::parse, path.string() + ": missing header");

  const auto& header = records.front().fields;
  std::string joined;
  for (std::size_t i = 0; i < header.size(); ++i) joined += (i ? "," : "") + header[i];
  if (joined != kManifestHeader) {
    throw Error(ErrorCode::parse, path.string() + ":1: expected header '" +
                                      std::string(kManifestHeader) + "', found '" + joined + "'");
  }

  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const CsvRecord& rec = records[r];
    const std::string where = path.string() + ":" + std::to_string(rec.line) + ": ";
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;  // blank line
    if (rec.fields.size() != 4) {
      throw Error(ErrorCode::parse, where + "expected 4 fields, found " +
                                        std::to_string(rec.fields.size()));
    }
    ManifestEntry e;
    e.frame_id = rec.fields[0];
    e.path = rec.fields[1];
    e.video_id = rec.fields[3];
    if (e.frame_id.empty()) throw Error(ErrorCode::parse, where + "empty frame_id");
    if (e.path.empty()) throw Error(ErrorCode::parse, where + "empty path");
    if (!rec.fields[2].empty()) {
      e.label = parse_label(rec.fields[2]);
      if (!e.label) throw Error(ErrorCode::parse, where + "unknown label '" + rec.fields[2] + "'");
    }
    if (!seen.insert(e.frame_id).second) {
      throw Error(ErrorCode::parse, where + "duplicate frame_id '" + e.frame_id + "'");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(const fs::path& path, const std::vector<ManifestEntry>& entries) {
  std::string text = std::string(kManifestHeader) + "\n";
  for (const ManifestEntry& e : entries) {
    text += join_csv({e.frame_id, e.path.string(),
                      e.label ? std::string(to_string(*e.label)) : std::string(), e.video_id});
  }
  write_file(path, text);
}

fs::path resolve_frame_path(const fs::path& manifest, const ManifestEntry& entry) {
  if (entry.path.is_absolute()) return entry.path;
  return manifest.parent_path() / entry.path;
}

Frame load_frame(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::io, "frame not found: " + path.string());
  const cv::Mat bgr = cv::imread(path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw Error(ErrorCode::data, "cannot decode image " + path.string());
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  if (!rgb.isContinuous()) rgb = rgb.clone();
  std::vector<std::uint8_t> px(rgb.data, rgb.data + rgb.total() * 3);
  return Frame(rgb.cols, rgb.rows, std::move(px));
}

void save_png(const Frame& frame, const fs::path& path) {
  cv::Mat rgb(frame.height(), frame.width(), CV_8UC3,
              const_cast<std::uint8_t*>(frame.pixels().data()));
  cv::Mat bgr;
  cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), bgr);
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::io, "cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) throw Error(ErrorCode::io, "cannot write " + path.string());
}

SelectionStats RunReport::selection_stats() const noexcept {
  SelectionStats s;
  s.total_frames = results.size();
  for (const FrameResult& r : results) {
    if (!r.selection) continue;
    ++s.patch_frames;
    if (r.selection->source == SelectionSource::fallback_center_crop) ++s.fallback_count;
  }
  return s;
}

fs::path write_results_csv(const RunReport& report, const fs::path& dir) {
  std::string text = results_header();
  for (std::size_t i = 0; i < report.results.size(); ++i) {
    const FrameResult& r = report.results[i];
    std::vector<std::string> row{r.frame_id, to_string(r.approach),
                                 std::string(to_string(r.predicted))};
    const auto& truth = i < report.truths.size() ? report.truths[i] : std::nullopt;
    row.push_back(truth ? std::string(to_string(*truth)) : std::string());
    if (r.selection) {
      const PatchRegion& g = r.selection->region;
      row.push_back(to_string(r.selection->source));
      for (int v : {g.x0, g.y0, g.x1, g.y1}) row.push_back(std::to_string(v));
      row.push_back(r.selection->score ? format_number(*r.selection->score) : std::string());
    } else {
      row.insert(row.end(), 6, std::string());
    }
    for (double p : r.scores.values()) row.push_back(format_number(p));
    text += join_csv(row);
  }
  const fs::path out = dir / "results.csv";
  write_file(out, text);
  return out;
}

fs::path write_errors_csv(const RunReport& report, const fs::path& dir) {
  std::string text = "frame_id,stage,code,message\n";
  for (const FrameError& e : report.errors) {
    text += join_csv({e.frame_id, e.stage, to_string(e.code), e.message});
  }
  const fs::path out = dir / "errors.csv";
  write_file(out, text);
  return out;
}

std::vector<fs::path> write_report(const RunReport& report, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<fs::path> written;
  written.push_back(write_results_csv(report, dir));

  std::string confusion = "truth";
  for (SkillLabel l : kAllLabels) confusion += "," + std::string(to_string(l));
  confusion += "\n";
  if (report.confusion && report.confusion->total() > 0) {
    for (SkillLabel t : kAllLabels) {
      confusion += to_string(t);
      for (SkillLabel p : kAllLabels) confusion += "," + std::to_string(report.confusion->at(t, p));
      confusion += "\n";
    }
  }
  written.push_back(dir / "confusion.csv");
  write_file(written.back(), confusion);

  std::string bench = bench_csv_header() + "\n";
  for (const BenchRecord& r : report.bench) bench += bench_csv_row(r) + "\n";
  written.push_back(dir / "bench.csv");
  write_file(written.back(), bench);

  const SelectionStats stats = report.selection_stats();
  json summary;
  summary["config"] = report.config;
  summary["frames"] = report.results.size();
  summary["errors"] = report.errors.size();
  summary["metrics"] = (report.confusion && report.confusion->total() > 0)
                           ? metrics_json(summarize(*report.confusion))
                           : json(nullptr);
  summary["selection"] = {{"patch_frames", stats.patch_frames},
                          {"fallback_count", stats.fallback_count},
                          {"fallback_fraction", six_digits(stats.fallback_fraction())}};
  summary["bench"] = json::array();
  for (const BenchRecord& r : report.bench) summary["bench"].push_back(bench_json(r));
  written.push_back(dir / "summary.json");
  write_file(written.back(), summary.dump(2) + "\n");

  if (!report.errors.empty()) written.push_back(write_errors_csv(report, dir));
  return written;
}

}  // namespace skillbench
