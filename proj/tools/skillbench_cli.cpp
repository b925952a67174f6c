// skillbench command-line front end. Talks to the engine only through the
// C API in skillbench.h.

#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "skillbench/skillbench.h"

namespace {

struct ConfigDeleter {
  void operator()(sb_config* c) const noexcept { sb_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<sb_config, ConfigDeleter>;

int report(sb_status status) {
  std::fprintf(stderr, "skillbench: %s: %s\n", sb_status_string(status), sb_last_error());
  return sb_exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static-skill classification pipelines and latency benchmark"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sb_version()));

  std::string config_path;
  std::string approach;
  std::string manifest;
  std::string out_dir;
  std::optional<int> workers;
  bool fail_fast = false;
  bool mock = false;
  std::optional<double> supplied_accuracy;

  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--approach", approach, "full-rgb | full-depth | rgb-patch | depth-patch");
  app.add_option("--manifest", manifest, "Frame manifest CSV (frame_id,path,label,video_id)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--workers", workers, "Parallel workers for classify/eval")->check(CLI::PositiveNumber);
  app.add_flag("--fail-fast", fail_fast, "Abort on the first per-frame failure");
  app.add_flag("--mock", mock, "Use the built-in mock backends for every role");
  app.add_option("--supplied-accuracy", supplied_accuracy,
                 "Accuracy to report in bench instead of measuring it")
      ->check(CLI::Range(0.0, 1.0));

  for (const char* name : {"classify", "eval", "bench", "extract-patches", "render-depth"}) {
    app.add_subcommand(name)->fallthrough();
  }
  app.get_subcommand("classify")->description("Classify every manifest frame; writes results.csv");
  app.get_subcommand("eval")->description("Classify labeled frames and write the full metrics report");
  app.get_subcommand("bench")->description("Cold-start and warm latency, accuracy and WAITT per approach");
  app.get_subcommand("extract-patches")->description("Write the selected athlete patch of each frame");
  app.get_subcommand("render-depth")->description("Write the colormapped depth render of each frame");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  sb_init_logging();

  sb_config* raw = nullptr;
  const sb_status loaded =
      config_path.empty() ? sb_config_create(&raw) : sb_config_load(config_path.c_str(), &raw);
  if (loaded != SB_OK) return report(loaded);
  ConfigPtr config(raw);

  // Flags override the config file.
  sb_status st = SB_OK;
  if (st == SB_OK && !approach.empty()) st = sb_config_set_approach(config.get(), approach.c_str());
  if (st == SB_OK && !manifest.empty()) st = sb_config_set_manifest(config.get(), manifest.c_str());
  if (st == SB_OK && !out_dir.empty()) st = sb_config_set_output_dir(config.get(), out_dir.c_str());
  if (st == SB_OK && workers) st = sb_config_set_workers(config.get(), *workers);
  if (st == SB_OK && fail_fast) st = sb_config_set_fail_fast(config.get(), 1);
  if (st == SB_OK && mock) st = sb_config_use_mock_backends(config.get());
  if (st == SB_OK && supplied_accuracy) {
    st = sb_config_set_supplied_accuracy(config.get(), *supplied_accuracy);
  }
  if (st != SB_OK) return report(st);

  const std::string command = app.get_subcommands().front()->get_name();
  sb_run_summary summary{};
  st = sb_run_command(config.get(), command.c_str(), &summary);
  if (st == SB_OK) {
    std::fprintf(stderr, "skillbench %s: %zu frames ok\n", command.c_str(), summary.frames);
    return 0;
  }
  if (st == SB_ERR_PARTIAL) {
    std::fprintf(stderr, "skillbench %s: %zu frames ok, %zu failed\n", command.c_str(),
                 summary.frames, summary.failures);
    return 1;
  }
  return report(st);
}
