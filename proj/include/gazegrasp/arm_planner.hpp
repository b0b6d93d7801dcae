#pragma once

#include "gazegrasp/geometry.hpp"
#include "gazegrasp/scene.hpp"

#include <optional>
#include <vector>

namespace gazegrasp {

struct ArmConfig {
  Vec3 elbow{0.05, -0.2, 0.85};
  double forearm_length = 0.26;              // m, elbow to wrist
  Vec3 home_direction = Vec3::UnitX();       // horizontal
  double approach_speed = 0.25;              // m/s
  double pour_angle = 120.0;                 // deg
  double roll_rate = 120.0;                  // deg/s
  double pour_hold = 1.0;                    // s at full pour roll
  double hover_clearance = 0.10;             // m above target top
  Aabb workspace{Vec3(0.35, 0.0, 1.1), Vec3(0.85, 1.0, 0.6)};

  void validate() const;  // throws ValidationError
};

struct Waypoint {
  Vec3 wrist = Vec3::Zero();
  Vec3 forearm_axis = Vec3::UnitX();  // unit, elbow -> wrist
  double wrist_roll = 0.0;            // deg about forearm_axis, 0 = palm-neutral
};

struct PlanningError : Error {
  enum class Code { TargetTooClose, OutOfWorkspace };
  PlanningError(Code c, const std::string& what) : Error(what), code(c) {}
  Code code;
};

const char* to_string(PlanningError::Code code) noexcept;

// Forearm parallel to the ground, pointing along home_direction.
Waypoint home_pose(const ArmConfig& cfg);

// Align the forearm with the elbow-target line (elbow fixed), then slide the wrist along
// that line to the target. Always two waypoints.
std::vector<Waypoint> reach_waypoints(const ArmConfig& cfg, const Vec3& target);

// Hover pose above an object: its center x/y (or `drop_xy` when given) at top + clearance.
Vec3 hover_point(const ArmConfig& cfg, const SceneObject& target, const std::optional<Eigen::Vector2d>& drop_xy = {});

// Align-then-extend toward the hover point; a single no-op waypoint when already there.
std::vector<Waypoint> transport_waypoints(const ArmConfig& cfg, const Waypoint& current, const SceneObject& target,
                                          const std::optional<Eigen::Vector2d>& drop_xy = {});

// Roll to pour_angle, hold, roll back; wrist position fixed.
std::vector<Waypoint> pour_waypoints(const ArmConfig& cfg, const Waypoint& hover);

}  // namespace gazegrasp
