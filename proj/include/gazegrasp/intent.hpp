#pragma once

#include "gazegrasp/gaze.hpp"

#include <optional>
#include <span>
#include <string>

namespace gazegrasp {

struct IntentConfig {
  double zone_fraction = 1.0 / 3.0;
  double dwell_duration = 0.5;  // s

  void validate() const;
};

struct ProjectedObject {
  std::string id;
  Rect bbox;
};

struct IntentEvent {
  double t = 0.0;
  std::string object_id;
  GazeHit gaze_hit;
};

// Right-most `zone_fraction` of the box, full height.
Rect intent_zone(const Rect& bbox, const IntentConfig& cfg);

// Fires iff the fixation has dwelt long enough, its centroid sits inside the intent zone
// of some projected box, and the 3D hit resolves to that same object.
std::optional<IntentEvent> decode_intent(const Fixation& fixation, std::span<const ProjectedObject> projected,
                                         const std::optional<GazeHit>& hit, const IntentConfig& cfg);

// decode_intent plus the one-shot latch: after firing on an object, stays silent until the
// fixation ends or its centroid leaves that object's zone.
class IntentDecoder {
 public:
  explicit IntentDecoder(IntentConfig cfg = {}) : cfg_(cfg) {}

  std::optional<IntentEvent> update(const std::optional<Fixation>& fixation,
                                    std::span<const ProjectedObject> projected, const std::optional<GazeHit>& hit);
  void reset() { latched_.reset(); }

  const IntentConfig& config() const { return cfg_; }
  const std::optional<std::string>& latched() const { return latched_; }

 private:
  IntentConfig cfg_;
  std::optional<std::string> latched_;
};

}  // namespace gazegrasp
