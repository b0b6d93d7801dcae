#include "gazegrasp/intent.hpp"

namespace gazegrasp {

void IntentConfig::validate() const {
  if (!(zone_fraction > 0.0 && zone_fraction <= 1.0)) throw ValidationError("intent.zone_fraction must lie in (0, 1]");
  if (!(dwell_duration > 0.0)) throw ValidationError("intent.dwell_duration must be positive");
}

Rect intent_zone(const Rect& bbox, const IntentConfig& cfg) {
  if (!(bbox.w > 0.0 && bbox.h > 0.0)) throw DomainError("intent_zone: degenerate bounding box");
  const double zone_w = bbox.w * cfg.zone_fraction;
  return Rect{bbox.x + bbox.w * (1.0 - cfg.zone_fraction), bbox.y, zone_w, bbox.h};
}

namespace {

bool in_zone_of(const Fixation& fixation, std::span<const ProjectedObject> projected, const std::string& id,
                const IntentConfig& cfg) {
  for (const auto& p : projected) {
    if (p.id != id || !(p.bbox.w > 0.0 && p.bbox.h > 0.0)) continue;
    if (intent_zone(p.bbox, cfg).contains(fixation.centroid.u, fixation.centroid.v)) return true;
  }
  return false;
}

}  // namespace

std::optional<IntentEvent> decode_intent(const Fixation& fixation, std::span<const ProjectedObject> projected,
                                         const std::optional<GazeHit>& hit, const IntentConfig& cfg) {
  if (fixation.duration < cfg.dwell_duration) return std::nullopt;
  if (!hit || !hit->object_id) return std::nullopt;
  // The hit is already the nearest object along the gaze ray, so among overlapping
  // zones only the nearest one can agree with it.
  if (!in_zone_of(fixation, projected, *hit->object_id, cfg)) return std::nullopt;
  return IntentEvent{fixation.start_t + fixation.duration, *hit->object_id, *hit};
}

std::optional<IntentEvent> IntentDecoder::update(const std::optional<Fixation>& fixation,
                                                 std::span<const ProjectedObject> projected,
                                                 const std::optional<GazeHit>& hit) {
  if (!fixation) {
    latched_.reset();
    return std::nullopt;
  }
  if (latched_) {
    const bool still_on = hit && hit->object_id == latched_ && in_zone_of(*fixation, projected, *latched_, cfg_);
    if (still_on) return std::nullopt;
    latched_.reset();
  }
  auto event = decode_intent(*fixation, projected, hit, cfg_);
  if (event) latched_ = event->object_id;
  return event;
}

}  // namespace gazegrasp
