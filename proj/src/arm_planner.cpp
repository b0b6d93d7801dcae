#include "gazegrasp/arm_planner.hpp"

#include <cmath>
#include <sstream>

namespace gazegrasp {

namespace {
constexpr double kSamePoint = 1e-6;

std::string fmt(const Vec3& v) {
  std::ostringstream ss;
  ss << "(" << v.x() << ", " << v.y() << ", " << v.z() << ")";
  return ss.str();
}
}  // namespace

void ArmConfig::validate() const {
  if (!(forearm_length > 0.0)) throw ValidationError("arm.forearm_length must be positive");
  if (std::abs(home_direction.norm() - 1.0) > 1e-9) throw ValidationError("arm.home_direction must be a unit vector");
  if (std::abs(home_direction.z()) > 1e-12) throw ValidationError("arm.home_direction must be parallel to the ground");
  if (!(approach_speed > 0.0)) throw ValidationError("arm.approach_speed must be positive");
  if (!(pour_angle > 0.0 && pour_angle <= 180.0)) throw ValidationError("arm.pour_angle must lie in (0, 180] degrees");
  if (!(roll_rate > 0.0)) throw ValidationError("arm.roll_rate must be positive");
  if (!(pour_hold >= 0.0)) throw ValidationError("arm.pour_hold must be non-negative");
  if (!(hover_clearance >= 0.0)) throw ValidationError("arm.hover_clearance must be non-negative");
  if (!(workspace.half_extents.array() > 0.0).all()) throw ValidationError("arm.workspace must have positive extent");
}

const char* to_string(PlanningError::Code code) noexcept {
  switch (code) {
    case PlanningError::Code::TargetTooClose: return "TargetTooClose";
    case PlanningError::Code::OutOfWorkspace: return "OutOfWorkspace";
  }
  return "?";
}

Waypoint home_pose(const ArmConfig& cfg) {
  return Waypoint{cfg.elbow + cfg.forearm_length * cfg.home_direction, cfg.home_direction, 0.0};
}

std::vector<Waypoint> reach_waypoints(const ArmConfig& cfg, const Vec3& target) {
  if (!cfg.workspace.contains(target))
    throw PlanningError(PlanningError::Code::OutOfWorkspace, "target " + fmt(target) + " outside workspace");
  const Vec3 offset = target - cfg.elbow;
  const double dist = offset.norm();
  if (dist <= cfg.forearm_length)
    throw PlanningError(PlanningError::Code::TargetTooClose,
                        "target " + fmt(target) + " within forearm length of the elbow");
  const Vec3 axis = offset / dist;
  return {Waypoint{cfg.elbow + cfg.forearm_length * axis, axis, 0.0}, Waypoint{target, axis, 0.0}};
}

Vec3 hover_point(const ArmConfig& cfg, const SceneObject& target, const std::optional<Eigen::Vector2d>& drop_xy) {
  const Eigen::Vector2d xy = drop_xy ? *drop_xy : target.aabb.center.head<2>();
  return {xy.x(), xy.y(), target.aabb.top() + cfg.hover_clearance};
}

std::vector<Waypoint> transport_waypoints(const ArmConfig& cfg, const Waypoint& current, const SceneObject& target,
                                          const std::optional<Eigen::Vector2d>& drop_xy) {
  const Vec3 hover = hover_point(cfg, target, drop_xy);
  if ((current.wrist - hover).norm() <= kSamePoint) return {current};
  return reach_waypoints(cfg, hover);
}

std::vector<Waypoint> pour_waypoints(const ArmConfig& cfg, const Waypoint& hover) {
  Waypoint tilted = hover;
  tilted.wrist_roll = cfg.pour_angle;
  Waypoint back = hover;
  back.wrist_roll = 0.0;
  return {tilted, tilted, back};
}

}  // namespace gazegrasp
