#include "skillbench/metrics.hpp"

#include <cmath>
#include <cstdio>

namespace skillbench {

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) noexcept {
  for (std::size_t t = 0; t < kNumLabels; ++t) {
    for (std::size_t p = 0; p < kNumLabels; ++p) counts_[t][p] += other.counts_[t][p];
  }
  return *this;
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  std::uint64_t n = 0;
  for (const auto& row : counts_) {
    for (std::uint64_t c : row) n += c;
  }
  return n;
}

std::uint64_t ConfusionMatrix::trace() const noexcept {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < kNumLabels; ++i) n += counts_[i][i];
  return n;
}

ConfusionMatrix accumulate(ConfusionMatrix cm, SkillLabel truth, SkillLabel predicted) {
  cm.accumulate(truth, predicted);
  return cm;
}

MetricsSummary summarize(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) throw Error(ErrorCode::argument, "cannot summarize an empty confusion matrix");

  const auto& c = cm.counts();
  MetricsSummary s;
  std::size_t active = 0;
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    std::uint64_t support = 0;
    std::uint64_t predicted = 0;
    for (std::size_t j = 0; j < kNumLabels; ++j) {
      support += c[k][j];
      predicted += c[j][k];
    }
    ClassMetrics& m = s.per_class[k];
    m.support = support;
    const double tp = static_cast<double>(c[k][k]);
    m.precision = predicted ? tp / static_cast<double>(predicted) : 0.0;
    m.recall = support ? tp / static_cast<double>(support) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    if (support == 0) continue;
    ++active;
    s.precision += m.precision;
    s.recall += m.recall;
    s.f1 += m.f1;
  }
  s.precision /= static_cast<double>(active);
  s.recall /= static_cast<double>(active);
  s.f1 /= static_cast<double>(active);
  s.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
  return s;
}

void WaittParams::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::config, "waitt alpha must be a finite value >= 0");
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::config, "waitt gamma must be a finite value > 0");
  }
}

double compute_waitt(double accuracy, double inference_time_s, const WaittParams& params) {
  params.validate();
  if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
    throw Error(ErrorCode::domain, "accuracy must lie in [0,1]");
  }
  if (!(inference_time_s >= 0.0) || !std::isfinite(inference_time_s)) {
    throw Error(ErrorCode::domain, "inference time must be finite and >= 0");
  }
  const double denominator =
      std::pow(inference_time_s, params.gamma) + params.alpha * (1.0 - accuracy);
  if (!(denominator > 0.0)) {
    throw Error(ErrorCode::domain, "WAITT denominator is zero (perfect accuracy at zero latency)");
  }
  return accuracy / denominator;
}

const char* to_string(ValueSource source) noexcept {
  return source == ValueSource::measured ? "measured" : "supplied";
}

BenchRecord make_bench_record(ApproachId approach, double accuracy, double cs1_s, double cs10_s,
                              double avg_iit_s, const WaittParams& params,
                              ValueSource accuracy_source, ValueSource timing_source) {
  BenchRecord r;
  r.approach = approach;
  r.accuracy = accuracy;
  r.cs1_s = cs1_s;
  r.cs10_s = cs10_s;
  r.avg_iit_s = avg_iit_s;
  r.params = params;
  r.accuracy_source = accuracy_source;
  r.timing_source = timing_source;
  r.waitt = compute_waitt(accuracy, avg_iit_s, params);
  return r;
}

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

std::string bench_csv_header() {
  return "approach,accuracy,cs1_iit_s,cs10_iit_s,avg_iit_s,waitt,accuracy_source,timing_source";
}

std::string bench_csv_row(const BenchRecord& r) {
  return std::string(to_string(r.approach)) + "," + format_number(r.accuracy) + "," +
         format_number(r.cs1_s) + "," + format_number(r.cs10_s) + "," +
         format_number(r.avg_iit_s) + "," + format_number(r.waitt) + "," +
         to_string(r.accuracy_source) + "," + to_string(r.timing_source);
}

}  // namespace skillbench
