#include "skillbench/labels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skillbench/error.hpp"

namespace skillbench {

namespace {

constexpr std::array<std::string_view, kNumLabels> kNames = {
    "BL", "FL", "FLAG", "IC", "MAL", "OAFL", "OAHS", "PL", "VSIT", "NONE"};

template <typename T>
ClassScores softmax(std::span<const T> logits) {
  if (logits.size() != kNumLabels) {
    throw Error(ErrorCode::shape_mismatch, "expected " + std::to_string(kNumLabels) +
                                               " classes, found " +
                                               std::to_string(logits.size()));
  }
  double peak = -INFINITY;
  for (T v : logits) {
    if (!std::isfinite(static_cast<double>(v))) {
      throw Error(ErrorCode::data, "non-finite classifier logit");
    }
    peak = std::max(peak, static_cast<double>(v));
  }
  std::array<double, kNumLabels> p{};
  double total = 0.0;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    p[i] = std::exp(static_cast<double>(logits[i]) - peak);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return ClassScores(p);
}

}  // namespace

std::string_view to_string(SkillLabel label) noexcept { return kNames[index_of(label)]; }

std::optional<SkillLabel> parse_label(std::string_view token) noexcept {
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    if (kNames[i] == token) return kAllLabels[i];
  }
  return std::nullopt;
}

ClassScores::ClassScores(const std::array<double, kNumLabels>& probabilities)
    : values_(probabilities) {
  double total = 0.0;
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    const double v = values_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::data, "class score for " + std::string(kNames[i]) +
                                       " outside [0,1]: " + std::to_string(v));
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw Error(ErrorCode::data, "class scores sum to " + std::to_string(total));
  }
}

ClassScores ClassScores::from_logits(std::span<const float> logits) {
  return softmax(logits);
}

ClassScores ClassScores::from_logits(std::span<const double> logits) {
  return softmax(logits);
}

ClassScores ClassScores::peaked(SkillLabel label, double peak) {
  if (!(peak >= 0.0 && peak <= 1.0)) {
    throw Error(ErrorCode::argument, "peak must lie in [0,1]");
  }
  std::array<double, kNumLabels> p{};
  p.fill((1.0 - peak) / static_cast<double>(kNumLabels - 1));
  p[index_of(label)] = peak;
  return ClassScores(p);
}

SkillLabel ClassScores::argmax() const noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kNumLabels; ++i) {
    if (values_[i] > values_[best]) best = i;
  }
  return kAllLabels[best];
}

}  // namespace skillbench
