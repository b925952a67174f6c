#include "skillbench/bench.hpp"

#include <algorithm>
#include <chrono>

namespace skillbench {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<Frame> frames_of(std::span<const LabeledFrame> labeled) {
  std::vector<Frame> out;
  out.reserve(labeled.size());
  for (const LabeledFrame& f : labeled) out.push_back(f.frame);
  return out;
}

}  // namespace

void TimingProtocol::validate() const {
  if (warm_samples < 1) throw Error(ErrorCode::config, "timing: warm_samples must be >= 1");
  if (repetitions < 1) throw Error(ErrorCode::config, "timing: repetitions must be >= 1");
}

double measure_cold_start(ApproachId approach, const BackendSpecs& specs,
                          const SelectionConfig& cfg, const TimingProtocol& protocol,
                          std::span<const Frame> frames, int n_images) {
  protocol.validate();
  if (n_images < 1) throw Error(ErrorCode::argument, "cold start needs n_images >= 1");
  if (frames.empty()) throw Error(ErrorCode::argument, "cold start needs at least one frame");

  std::vector<double> runs;
  runs.reserve(static_cast<std::size_t>(protocol.repetitions));
  for (int rep = 0; rep < protocol.repetitions; ++rep) {
    const auto start = Clock::now();
    {
      const BackendSet set = load_backends(specs, approach, cfg);
      const Backends view = set.view();
      for (int i = 0; i < n_images; ++i) {
        run_frame("cold", frames[static_cast<std::size_t>(i) % frames.size()], approach, view, cfg);
      }
    }
    runs.push_back(seconds_since(start));
  }
  return median(std::move(runs));
}

double measure_warm_avg(ApproachId approach, const Backends& backends, const SelectionConfig& cfg,
                        const TimingProtocol& protocol, std::span<const Frame> frames) {
  protocol.validate();
  if (frames.size() < 2) {
    throw Error(ErrorCode::argument, "warm timing needs at least 2 frames (the first is warm-up)");
  }
  run_frame("warm-up", frames[0], approach, backends, cfg);

  const std::size_t pool = frames.size() - 1;
  double total = 0.0;
  for (int i = 0; i < protocol.warm_samples; ++i) {
    const Frame& f = frames[1 + static_cast<std::size_t>(i) % pool];
    const auto start = Clock::now();
    run_frame("warm", f, approach, backends, cfg);
    total += seconds_since(start);
  }
  return total / protocol.warm_samples;
}

std::vector<BenchRecord> run_benchmark(std::span<const BenchPlan> plans, const SelectionConfig& cfg,
                                       const TimingProtocol& protocol, const WaittParams& params,
                                       std::span<const LabeledFrame> frames) {
  protocol.validate();
  params.validate();
  std::vector<BenchRecord> records;
  if (plans.empty()) return records;

  const std::vector<Frame> images = frames_of(frames);
  for (const BenchPlan& plan : plans) {
    const bool need_timing = !(plan.forced_cs1_s && plan.forced_cs10_s && plan.forced_avg_iit_s);
    const bool need_accuracy = !plan.supplied_accuracy;
    if (need_accuracy) {
      for (const LabeledFrame& f : frames) {
        if (!f.label) {
          throw Error(ErrorCode::config, std::string("approach ") + to_string(plan.approach) +
                                             ": accuracy needs labeled frames or a supplied value");
        }
      }
      if (frames.empty()) {
        throw Error(ErrorCode::config, std::string("approach ") + to_string(plan.approach) +
                                           ": no frames to measure accuracy on");
      }
    }

    double cs1 = plan.forced_cs1_s.value_or(0.0);
    double cs10 = plan.forced_cs10_s.value_or(0.0);
    double avg = plan.forced_avg_iit_s.value_or(0.0);
    double accuracy = plan.supplied_accuracy.value_or(0.0);

    if (need_timing) {
      if (!plan.forced_cs1_s) cs1 = measure_cold_start(plan.approach, plan.specs, cfg, protocol, images, 1);
      if (!plan.forced_cs10_s) cs10 = measure_cold_start(plan.approach, plan.specs, cfg, protocol, images, 10);
    }
    if (need_timing || need_accuracy) {
      const BackendSet set = load_backends(plan.specs, plan.approach, cfg);
      const Backends view = set.view();
      if (!plan.forced_avg_iit_s) avg = measure_warm_avg(plan.approach, view, cfg, protocol, images);
      if (need_accuracy) {
        ConfusionMatrix cm;
        for (const LabeledFrame& f : frames) {
          cm.accumulate(*f.label, run_frame("accuracy", f.frame, plan.approach, view, cfg).predicted);
        }
        accuracy = summarize(cm).accuracy;
      }
    }

    const bool any_forced = plan.forced_cs1_s || plan.forced_cs10_s || plan.forced_avg_iit_s;
    records.push_back(make_bench_record(
        plan.approach, accuracy, cs1, cs10, avg, params,
        need_accuracy ? ValueSource::measured : ValueSource::supplied,
        any_forced ? ValueSource::supplied : ValueSource::measured));
  }
  return records;
}

}  // namespace skillbench
