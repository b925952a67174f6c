#pragma once

#include <optional>
#include <span>
#include <vector>

#include "skillbench/image.hpp"

namespace skillbench {

/// Axis-aligned box in (possibly fractional) pixel coordinates as emitted by
/// a detector. May overshoot the frame.
struct Box {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const noexcept { return x1 - x0; }
  double height() const noexcept { return y1 - y0; }
  double area() const noexcept { return width() > 0.0 && height() > 0.0 ? width() * height() : 0.0; }

  bool operator==(const Box&) const = default;
};

Box to_box(const PatchRegion& region) noexcept;
Box intersect_frame(const Box& box, int frame_w, int frame_h) noexcept;

struct Detection {
  Box box;
  double confidence = 0.0;

  bool operator==(const Detection&) const = default;
};

/// Post-processing constants for foreground instance selection.
struct SelectionConfig {
  double conf_weight = 0.6;
  double area_weight = 0.4;
  double min_area_fraction = 0.01;
  double fallback_scale = 0.8;
  double enlarge_max = 0.15;
  double enlarge_min = 0.05;
  double detector_conf_threshold = 0.2;

  /// Throws Error(config) on the first violated constraint.
  void validate() const;

  bool operator==(const SelectionConfig&) const = default;
};

enum class SelectionSource { detected, fallback_center_crop };

const char* to_string(SelectionSource source) noexcept;

struct SelectionOutcome {
  PatchRegion region;
  SelectionSource source = SelectionSource::fallback_center_crop;
  std::optional<double> score;           // set iff detected
  std::optional<std::size_t> chosen;     // index into the input list, set iff detected

  bool operator==(const SelectionOutcome&) const = default;
};

/// Fraction of the frame covered by `box` after intersecting it with the frame.
double area_fraction(const Box& box, int frame_w, int frame_h) noexcept;

/// Weighted average of detector confidence and frame-relative box area.
double score_detection(const Detection& d, int frame_w, int frame_h, const SelectionConfig& cfg);

/// Strict weak order used to pick the winner: higher score, then higher
/// confidence, then larger (frame-clipped) area, then lower list index.
bool ranks_before(double score_a, const Detection& a, std::size_t index_a, double score_b,
                  const Detection& b, std::size_t index_b, int frame_w, int frame_h) noexcept;

/// Centered region round(scale*W) x round(scale*H); sides never drop below 1.
PatchRegion fallback_center_crop(int frame_w, int frame_h, const SelectionConfig& cfg);

/// Growth fraction per side length for a box covering `ratio` of the frame:
/// enlarge_max at ratio 0 falling linearly to enlarge_min at ratio 1.
double enlargement_fraction(double ratio, const SelectionConfig& cfg) noexcept;

/// Grows the box about its centre by enlargement_fraction(), rounds outward
/// to whole pixels and clips to the frame.
PatchRegion enlarge_box(const Box& box, int frame_w, int frame_h, const SelectionConfig& cfg);
PatchRegion enlarge_box(const PatchRegion& box, int frame_w, int frame_h,
                        const SelectionConfig& cfg);

/// Intersection of `region` with the frame. Identity for in-bounds regions.
PatchRegion clip_region(const PatchRegion& region, int frame_w, int frame_h) noexcept;

/// Picks the most prominent detection, falling back to a center crop when
/// nothing usable survives or the winner is too small. Always returns an
/// in-bounds region.
SelectionOutcome select_primary(std::span<const Detection> detections, int frame_w, int frame_h,
                                const SelectionConfig& cfg);

}  // namespace skillbench
