#pragma once

#include <optional>
#include <span>
#include <vector>

#include "skillbench/metrics.hpp"
#include "skillbench/pipeline.hpp"

namespace skillbench {

struct TimingProtocol {
  int warm_samples = 100;
  int repetitions = 3;  // cold-start runs; the median is reported

  void validate() const;
  bool operator==(const TimingProtocol&) const = default;
};

/// Wall time from before backend loading until `n_images` frames have been
/// classified, cycling through `frames`. Backends are torn down after every
/// repetition; returns the median over repetitions.
double measure_cold_start(ApproachId approach, const BackendSpecs& specs,
                          const SelectionConfig& cfg, const TimingProtocol& protocol,
                          std::span<const Frame> frames, int n_images);

/// One discarded warm-up inference on frames[0], then `warm_samples`
/// individually timed inferences cycling through the remaining frames.
/// Returns their mean. Needs at least two frames.
double measure_warm_avg(ApproachId approach, const Backends& backends, const SelectionConfig& cfg,
                        const TimingProtocol& protocol, std::span<const Frame> frames);

struct LabeledFrame {
  Frame frame;
  std::optional<SkillLabel> label;
};

/// What to benchmark for one approach. Supplied values replace the
/// corresponding measurement and are flagged as supplied in the record.
struct BenchPlan {
  ApproachId approach = ApproachId::full_rgb;
  BackendSpecs specs;
  std::optional<double> supplied_accuracy;
  std::optional<double> forced_cs1_s;
  std::optional<double> forced_cs10_s;
  std::optional<double> forced_avg_iit_s;
};

/// One record per plan, in plan order. Accuracy is measured over `frames`
/// when it is not supplied; that requires every frame to carry a label.
std::vector<BenchRecord> run_benchmark(std::span<const BenchPlan> plans, const SelectionConfig& cfg,
                                       const TimingProtocol& protocol, const WaittParams& params,
                                       std::span<const LabeledFrame> frames);

}  // namespace skillbench
