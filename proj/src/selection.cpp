#include "skillbench/selection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skillbench/error.hpp"

namespace skillbench {

namespace {

void check_frame(int frame_w, int frame_h) {
  if (frame_w < 1 || frame_h < 1) {
    throw Error(ErrorCode::argument, "frame dimensions must be positive, got " +
                                         std::to_string(frame_w) + "x" + std::to_string(frame_h));
  }
}

double frame_area(int frame_w, int frame_h) noexcept {
  return static_cast<double>(frame_w) * static_cast<double>(frame_h);
}

int round_half_up(double v) noexcept { return static_cast<int>(std::floor(v + 0.5)); }

// Outward rounding that ignores floating-point noise around whole pixels,
// so a 100 px side grown by 10% is 110 px and not 111.
constexpr double kSnap = 1e-9;

int floor_snapped(double v) noexcept {
  const double r = std::round(v);
  return static_cast<int>(std::abs(v - r) < kSnap ? r : std::floor(v));
}

int ceil_snapped(double v) noexcept {
  const double r = std::round(v);
  return static_cast<int>(std::abs(v - r) < kSnap ? r : std::ceil(v));
}

}  // namespace

void SelectionConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::config, "selection: " + what); };
  if (!(conf_weight >= 0.0 && area_weight >= 0.0) ||
      std::abs(conf_weight + area_weight - 1.0) > 1e-9) {
    fail("conf_weight and area_weight must be non-negative and sum to 1");
  }
  if (!(enlarge_min > 0.0 && enlarge_min <= enlarge_max && enlarge_max < 1.0)) {
    fail("need 0 < enlarge_min <= enlarge_max < 1");
  }
  if (!(fallback_scale > 0.0 && fallback_scale < 1.0)) fail("fallback_scale must lie in (0,1)");
  if (!(min_area_fraction > 0.0 && min_area_fraction < 1.0)) {
    fail("min_area_fraction must lie in (0,1)");
  }
  if (!(detector_conf_threshold >= 0.0 && detector_conf_threshold <= 1.0)) {
    fail("detector_conf_threshold must lie in [0,1]");
  }
}

const char* to_string(SelectionSource source) noexcept {
  return source == SelectionSource::detected ? "detected" : "fallback_center_crop";
}

Box to_box(const PatchRegion& region) noexcept {
  return {static_cast<double>(region.x0), static_cast<double>(region.y0),
          static_cast<double>(region.x1), static_cast<double>(region.y1)};
}

Box intersect_frame(const Box& box, int frame_w, int frame_h) noexcept {
  return {std::clamp(box.x0, 0.0, static_cast<double>(frame_w)),
          std::clamp(box.y0, 0.0, static_cast<double>(frame_h)),
          std::clamp(box.x1, 0.0, static_cast<double>(frame_w)),
          std::clamp(box.y1, 0.0, static_cast<double>(frame_h))};
}

double area_fraction(const Box& box, int frame_w, int frame_h) noexcept {
  return intersect_frame(box, frame_w, frame_h).area() / frame_area(frame_w, frame_h);
}

double score_detection(const Detection& d, int frame_w, int frame_h, const SelectionConfig& cfg) {
  check_frame(frame_w, frame_h);
  return cfg.conf_weight * d.confidence + cfg.area_weight * area_fraction(d.box, frame_w, frame_h);
}

bool ranks_before(double score_a, const Detection& a, std::size_t index_a, double score_b,
                  const Detection& b, std::size_t index_b, int frame_w, int frame_h) noexcept {
  if (score_a != score_b) return score_a > score_b;
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  const double area_a = intersect_frame(a.box, frame_w, frame_h).area();
  const double area_b = intersect_frame(b.box, frame_w, frame_h).area();
  if (area_a != area_b) return area_a > area_b;
  return index_a < index_b;
}

PatchRegion fallback_center_crop(int frame_w, int frame_h, const SelectionConfig& cfg) {
  check_frame(frame_w, frame_h);
  const int w = std::clamp(round_half_up(cfg.fallback_scale * frame_w), 1, frame_w);
  const int h = std::clamp(round_half_up(cfg.fallback_scale * frame_h), 1, frame_h);
  const int x0 = (frame_w - w) / 2;
  const int y0 = (frame_h - h) / 2;
  return {x0, y0, x0 + w, y0 + h};
}

double enlargement_fraction(double ratio, const SelectionConfig& cfg) noexcept {
  const double r = std::clamp(ratio, 0.0, 1.0);
  return cfg.enlarge_max - (cfg.enlarge_max - cfg.enlarge_min) * r;
}

PatchRegion clip_region(const PatchRegion& region, int frame_w, int frame_h) noexcept {
  return {std::clamp(region.x0, 0, frame_w), std::clamp(region.y0, 0, frame_h),
          std::clamp(region.x1, 0, frame_w), std::clamp(region.y1, 0, frame_h)};
}

PatchRegion enlarge_box(const Box& box, int frame_w, int frame_h, const SelectionConfig& cfg) {
  check_frame(frame_w, frame_h);
  const Box inside = intersect_frame(box, frame_w, frame_h);
  if (!(inside.area() > 0.0)) {
    throw Error(ErrorCode::argument, "enlarge_box needs a box with positive area inside the frame");
  }
  const double e = enlargement_fraction(inside.area() / frame_area(frame_w, frame_h), cfg);
  const double cx = 0.5 * (box.x0 + box.x1);
  const double cy = 0.5 * (box.y0 + box.y1);
  const double half_w = 0.5 * box.width() * (1.0 + e);
  const double half_h = 0.5 * box.height() * (1.0 + e);
  const PatchRegion grown{floor_snapped(std::max(cx - half_w, -1.0)),
                          floor_snapped(std::max(cy - half_h, -1.0)),
                          ceil_snapped(std::min(cx + half_w, frame_w + 1.0)),
                          ceil_snapped(std::min(cy + half_h, frame_h + 1.0))};
  return clip_region(grown, frame_w, frame_h);
}

PatchRegion enlarge_box(const PatchRegion& box, int frame_w, int frame_h,
                        const SelectionConfig& cfg) {
  return enlarge_box(to_box(box), frame_w, frame_h, cfg);
}

SelectionOutcome select_primary(std::span<const Detection> detections, int frame_w, int frame_h,
                                const SelectionConfig& cfg) {
  check_frame(frame_w, frame_h);
  std::optional<std::size_t> best;
  double best_score = 0.0;
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const Detection& d = detections[i];
    if (!(d.confidence >= cfg.detector_conf_threshold)) continue;
    if (!(intersect_frame(d.box, frame_w, frame_h).area() > 0.0)) continue;
    const double s = score_detection(d, frame_w, frame_h, cfg);
    if (!best || ranks_before(s, d, i, best_score, detections[*best], *best, frame_w, frame_h)) {
      best = i;
      best_score = s;
    }
  }

  SelectionOutcome out;
  if (!best || area_fraction(detections[*best].box, frame_w, frame_h) < cfg.min_area_fraction) {
    out.region = fallback_center_crop(frame_w, frame_h, cfg);
    out.source = SelectionSource::fallback_center_crop;
    return out;
  }
  out.region = enlarge_box(detections[*best].box, frame_w, frame_h, cfg);
  out.source = SelectionSource::detected;
  out.score = best_score;
  out.chosen = best;
  return out;
}

}  // namespace skillbench
