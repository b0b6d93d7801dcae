#include "gazegrasp/config.hpp"

#include "json_util.hpp"

namespace gazegrasp {

using json_util::optional;
using json_util::require;

void SessionConfig::validate() const {
  scene.validate();
  camera.validate();
  fixation.validate();
  intent.validate();
  arm.validate();
  limits.validate();
  if (!(dt > 0.0)) throw ValidationError("tick_rate must be positive");
  if (intent.dwell_duration > fixation.window)
    throw ValidationError("intent.dwell_duration exceeds the fixation window; no intent could ever fire");
  for (const auto& id : faults.grasp_fail_on)
    if (!scene.find(id)) throw ValidationError("faults.grasp_fail_on: unknown object id '" + id + "'");
}

CameraModel camera_from_json(const nlohmann::json& doc) {
  const std::string w = "camera";
  CameraModel cam;
  cam.position = json_util::require_vec3(doc, "position", w);
  const auto& q = json_util::require_field(doc, "orientation", w);
  if (!q.is_array() || q.size() != 4) throw ParseError("camera.orientation: expected [w, x, y, z]");
  for (const auto& c : q)
    if (!c.is_number()) throw ParseError("camera.orientation: expected numbers");
  cam.orientation = Quat(q[0].get<double>(), q[1].get<double>(), q[2].get<double>(), q[3].get<double>());
  cam.fx = require<double>(doc, "fx", w);
  cam.fy = require<double>(doc, "fy", w);
  cam.cx = require<double>(doc, "cx", w);
  cam.cy = require<double>(doc, "cy", w);
  cam.width = require<int>(doc, "width", w);
  cam.height = require<int>(doc, "height", w);
  return cam;
}

nlohmann::json camera_to_json(const CameraModel& cam) {
  const auto& q = cam.orientation;
  return {{"position", json_util::vec3(cam.position)},
          {"orientation", {q.w(), q.x(), q.y(), q.z()}},
          {"fx", cam.fx},
          {"fy", cam.fy},
          {"cx", cam.cx},
          {"cy", cam.cy},
          {"width", cam.width},
          {"height", cam.height}};
}

FaultConfig faults_from_json(const nlohmann::json& doc) {
  FaultConfig f;
  if (!doc.is_object()) throw ParseError("faults: expected object");
  if (const auto it = doc.find("force_spike"); it != doc.end() && !it->is_null()) {
    ForceSpike spike;
    spike.t = require<double>(*it, "t", "faults.force_spike");
    spike.force = json_util::require_vec3(*it, "force", "faults.force_spike");
    if (it->contains("torque")) spike.torque = json_util::require_vec3(*it, "torque", "faults.force_spike");
    f.force_spike = spike;
  }
  if (const auto it = doc.find("grasp_fail_on"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("faults.grasp_fail_on: expected array of ids");
    for (const auto& id : *it) {
      if (!id.is_string()) throw ParseError("faults.grasp_fail_on: expected array of ids");
      f.grasp_fail_on.push_back(id.get<std::string>());
    }
  }
  return f;
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

SessionConfig session_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ParseError("session config: expected object");
  SessionConfig cfg;
  cfg.scene = load_scene_file(resolve(base_dir, require<std::string>(doc, "scene")));
  if (doc.contains("grammar")) cfg.grammar = ActionGrammar::load_file(resolve(base_dir, require<std::string>(doc, "grammar")));
  cfg.camera = camera_from_json(json_util::require_field(doc, "camera"));

  if (const auto it = doc.find("fixation"); it != doc.end()) {
    const std::string w = "fixation";
    cfg.fixation.dispersion_threshold = optional(*it, "dispersion_threshold", cfg.fixation.dispersion_threshold, w);
    cfg.fixation.min_duration = optional(*it, "min_duration", cfg.fixation.min_duration, w);
    cfg.fixation.window = optional(*it, "window", cfg.fixation.window, w);
  }
  if (const auto it = doc.find("intent"); it != doc.end()) {
    const std::string w = "intent";
    cfg.intent.zone_fraction = optional(*it, "zone_fraction", cfg.intent.zone_fraction, w);
    cfg.intent.dwell_duration = optional(*it, "dwell_duration", cfg.intent.dwell_duration, w);
  }
  if (const auto it = doc.find("arm"); it != doc.end()) {
    const std::string w = "arm";
    auto& a = cfg.arm;
    if (it->contains("elbow")) a.elbow = json_util::require_vec3(*it, "elbow", w);
    if (it->contains("home_direction")) a.home_direction = json_util::require_vec3(*it, "home_direction", w);
    a.forearm_length = optional(*it, "forearm_length", a.forearm_length, w);
    a.approach_speed = optional(*it, "approach_speed", a.approach_speed, w);
    a.pour_angle = optional(*it, "pour_angle", a.pour_angle, w);
    a.roll_rate = optional(*it, "roll_rate", a.roll_rate, w);
    a.pour_hold = optional(*it, "pour_hold", a.pour_hold, w);
    a.hover_clearance = optional(*it, "hover_clearance", a.hover_clearance, w);
    if (it->contains("workspace")) {
      const auto& ws = it->at("workspace");
      const Vec3 lo = json_util::require_vec3(ws, "min", "arm.workspace");
      const Vec3 hi = json_util::require_vec3(ws, "max", "arm.workspace");
      a.workspace = Aabb{(lo + hi) / 2.0, (hi - lo) / 2.0};
    }
  }
  if (const auto it = doc.find("limits"); it != doc.end()) {
    const std::string w = "limits";
    auto& l = cfg.limits;
    l.max_force = optional(*it, "max_force", l.max_force, w);
    l.max_torque = optional(*it, "max_torque", l.max_torque, w);
    l.min_grasp_force = optional(*it, "min_grasp_force", l.min_grasp_force, w);
    l.full_close_threshold = optional(*it, "full_close_threshold", l.full_close_threshold, w);
    l.stall_rate = optional(*it, "stall_rate", l.stall_rate, w);
    l.grasp_radius = optional(*it, "grasp_radius", l.grasp_radius, w);
    l.glove_rate = optional(*it, "glove_rate", l.glove_rate, w);
    l.contact_flexion = optional(*it, "contact_flexion", l.contact_flexion, w);
    l.force_ramp = optional(*it, "force_ramp", l.force_ramp, w);
    l.max_tendon_force = optional(*it, "max_tendon_force", l.max_tendon_force, w);
    l.grasp_timeout = optional(*it, "grasp_timeout", l.grasp_timeout, w);
    l.release_open_threshold = optional(*it, "release_open_threshold", l.release_open_threshold, w);
  }
  if (const auto it = doc.find("faults"); it != doc.end()) cfg.faults = faults_from_json(*it);
  const double rate = optional(doc, "tick_rate", 60.0);
  if (!(rate > 0.0)) throw ValidationError("tick_rate must be positive");
  cfg.dt = 1.0 / rate;
  cfg.deterministic = optional(doc, "deterministic", true);
  cfg.validate();
  return cfg;
}

SessionConfig load_session_config(const std::filesystem::path& path) {
  const auto doc = json_util::parse(json_util::read_file(path), "session config");
  return session_config_from_json(doc, path.parent_path());
}

}  // namespace gazegrasp
