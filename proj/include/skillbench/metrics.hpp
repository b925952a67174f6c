#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "skillbench/labels.hpp"
#include "skillbench/pipeline.hpp"

namespace skillbench {

/// Rows are true labels, columns predicted labels.
class ConfusionMatrix {
 public:
  using Counts = std::array<std::array<std::uint64_t, kNumLabels>, kNumLabels>;

  ConfusionMatrix() = default;
  explicit ConfusionMatrix(const Counts& counts) : counts_(counts) {}

  void accumulate(SkillLabel truth, SkillLabel predicted) noexcept {
    ++counts_[index_of(truth)][index_of(predicted)];
  }
  /// Element-wise sum; merges per-worker matrices.
  ConfusionMatrix& operator+=(const ConfusionMatrix& other) noexcept;

  std::uint64_t at(SkillLabel truth, SkillLabel predicted) const noexcept {
    return counts_[index_of(truth)][index_of(predicted)];
  }
  const Counts& counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept;
  std::uint64_t trace() const noexcept;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  Counts counts_{};
};

ConfusionMatrix accumulate(ConfusionMatrix cm, SkillLabel truth, SkillLabel predicted);

struct ClassMetrics {
  std::uint64_t support = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Macro averages over the classes that have support. A class with support
/// but no predicted positives scores precision 0.
struct MetricsSummary {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
  std::array<ClassMetrics, kNumLabels> per_class{};
};

/// Throws Error(argument) for an empty matrix.
MetricsSummary summarize(const ConfusionMatrix& cm);

struct WaittParams {
  double alpha = 1.0;
  double gamma = 2.0;

  void validate() const;
  bool operator==(const WaittParams&) const = default;
};

/// Weighted accuracy / inference-time trade-off:
///
///   A / (IT^gamma + alpha * (1 - A))
///
/// Higher is better. A zero denominator (perfect accuracy at zero latency,
/// or alpha = 0 at zero latency) is a domain error.
double compute_waitt(double accuracy, double inference_time_s, const WaittParams& params = {});

enum class ValueSource { measured, supplied };

const char* to_string(ValueSource source) noexcept;

/// One row of the latency/accuracy table.
struct BenchRecord {
  ApproachId approach = ApproachId::full_rgb;
  double accuracy = 0.0;
  double cs1_s = 0.0;
  double cs10_s = 0.0;
  double avg_iit_s = 0.0;
  double waitt = 0.0;
  WaittParams params;
  ValueSource accuracy_source = ValueSource::measured;
  ValueSource timing_source = ValueSource::measured;
};

/// Fills `waitt` from the other fields.
BenchRecord make_bench_record(ApproachId approach, double accuracy, double cs1_s, double cs10_s,
                              double avg_iit_s, const WaittParams& params,
                              ValueSource accuracy_source = ValueSource::measured,
                              ValueSource timing_source = ValueSource::measured);

/// Header and row in table column order: approach, accuracy, 1 CS IIT,
/// 10 CS IIT, AVG IIT, WAITT, followed by the provenance columns.
std::string bench_csv_header();
std::string bench_csv_row(const BenchRecord& record);

/// printf("%.6g") formatting used by every report writer.
std::string format_number(double value);

}  // namespace skillbench
