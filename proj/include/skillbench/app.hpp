#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skillbench/bench.hpp"
#include "skillbench/metrics.hpp"
#include "skillbench/pipeline.hpp"
#include "skillbench/selection.hpp"

namespace skillbench {

/// Benchmark entry for one approach. `backends` overrides the top-level
/// specs role by role.
struct BenchApproachConfig {
  ApproachId approach = ApproachId::full_rgb;
  BackendSpecs backends;
  std::optional<double> supplied_accuracy;
  std::optional<double> forced_cs1_s;
  std::optional<double> forced_cs10_s;
  std::optional<double> forced_avg_iit_s;
};

/// Everything a command needs. Defaults carry the published constants.
struct RunConfig {
  std::optional<ApproachId> approach;
  BackendSpecs backends;
  SelectionConfig selection;
  WaittParams waitt;
  TimingProtocol timing;
  std::filesystem::path manifest;
  std::filesystem::path output_dir = "out";
  int workers = 1;
  bool fail_fast = false;
  std::vector<BenchApproachConfig> bench;
  std::optional<double> supplied_accuracy;  // applies to bench entries without their own

  void validate() const;
  /// Serialisable snapshot embedded in every report. The output directory
  /// is left out so identical runs into different directories match.
  nlohmann::json snapshot() const;
};

/// Parses the JSON config document. Relative paths resolve against
/// `base_dir`. Unknown keys are rejected.
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

/// Replaces every non-mock backend spec, and fills missing roles, with the
/// default mocks: bright_region detector, luminance depth, mean_red
/// classifier.
void use_mock_backends(RunConfig& config);

/// 0 success, 1 per-frame failures, 2 config or user error, 3 backend or
/// environment error.
int exit_code_for(ErrorCode code) noexcept;

struct CommandOutcome {
  int exit_code = 0;
  std::size_t frames = 0;    // frames processed successfully
  std::size_t failures = 0;  // per-frame failures
  ErrorCode code = ErrorCode::internal;  // meaningful when exit_code >= 2
  std::string message;
  std::vector<std::filesystem::path> files;
};

// Subcommands. None of these throw; failures come back as exit codes.
CommandOutcome cmd_classify(const RunConfig& config);
CommandOutcome cmd_eval(const RunConfig& config);
CommandOutcome cmd_bench(const RunConfig& config);
CommandOutcome cmd_extract_patches(const RunConfig& config);
CommandOutcome cmd_render_depth(const RunConfig& config);

/// Dispatches on the subcommand name: classify, eval, bench,
/// extract-patches, render-depth.
CommandOutcome run_command(const std::string& name, const RunConfig& config);

/// Configures logging from SKILLBENCH_LOG_LEVEL (trace, debug, info, warn,
/// error, off). Defaults to warn.
void init_logging();

}  // namespace skillbench
