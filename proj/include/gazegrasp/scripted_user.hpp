#pragma once

#include "gazegrasp/session.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gazegrasp {

// One deliberate look: fixate the intent zone of `target`, optionally aiming the gaze at a
// world point on it (where to set an object down on the table).
struct ScriptStep {
  std::string target;
  std::optional<Vec3> look_at;
};

struct ScriptTiming {
  double settle = 0.4;        // s looking away before each step
  double fixate_timeout = 3.0;
  double execute_timeout = 60.0;
  double tail = 0.5;          // s looking away after the last step
  double jitter = 1.0;        // px, peak fixational jitter
  int max_attempts = 5;
  unsigned seed = 7;
};

struct GazeScript {
  std::vector<ScriptStep> steps;
  ScriptTiming timing;
};

GazeScript gaze_script_from_json(const nlohmann::json& doc);
GazeScript load_gaze_script(const std::filesystem::path& path);

struct AuthoredTrace {
  std::vector<GazeSample> samples;
  ReplayResult result;  // the authoring run itself
};

// Drives a session closed-loop: looks away while the arm works, fixates the next target's
// intent zone when the session is idle, and repeats a step whose plan failed. Throws Error
// when a step cannot be completed within its timeouts or attempts.
AuthoredTrace author_trace(const SessionConfig& cfg, const GazeScript& script);

// Pixel inside `target`'s intent zone whose gaze ray resolves to `target`, nearest to the
// zone center or to the projection of `look_at`. nullopt when the zone has no such pixel.
std::optional<Pixel> choose_fixation_pixel(const Session& session, const std::string& target,
                                           const std::optional<Vec3>& look_at, double margin = 4.0);

// Pixel outside every projected bounding box.
Pixel choose_neutral_pixel(const Session& session);

}  // namespace gazegrasp
