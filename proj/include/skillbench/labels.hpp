#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace skillbench {

// The nine calisthenics static skills plus the background class.
enum class SkillLabel : std::uint8_t { BL, FL, FLAG, IC, MAL, OAFL, OAHS, PL, VSIT, NONE };

inline constexpr std::size_t kNumLabels = 10;

inline constexpr std::array<SkillLabel, kNumLabels> kAllLabels = {
    SkillLabel::BL,   SkillLabel::FL,   SkillLabel::FLAG, SkillLabel::IC, SkillLabel::MAL,
    SkillLabel::OAFL, SkillLabel::OAHS, SkillLabel::PL,   SkillLabel::VSIT, SkillLabel::NONE};

constexpr std::size_t index_of(SkillLabel label) noexcept {
  return static_cast<std::size_t>(label);
}

std::string_view to_string(SkillLabel label) noexcept;
std::optional<SkillLabel> parse_label(std::string_view token) noexcept;

/// Per-class probabilities in SkillLabel order.
///
/// Construction validates: every entry in [0,1] and the sum within 1e-5
/// of 1.0. Use from_logits() for raw network outputs.
class ClassScores {
 public:
  static constexpr double kSumTolerance = 1e-5;

  explicit ClassScores(const std::array<double, kNumLabels>& probabilities);

  static ClassScores from_logits(std::span<const float> logits);
  static ClassScores from_logits(std::span<const double> logits);
  /// Scores with `peak` on `label` and the remainder spread evenly.
  static ClassScores peaked(SkillLabel label, double peak = 0.91);

  double operator[](SkillLabel label) const noexcept { return values_[index_of(label)]; }
  const std::array<double, kNumLabels>& values() const noexcept { return values_; }

  // Ties resolve to the first label in SkillLabel order.
  SkillLabel argmax() const noexcept;

  bool operator==(const ClassScores&) const = default;

 private:
  std::array<double, kNumLabels> values_;
};

}  // namespace skillbench
