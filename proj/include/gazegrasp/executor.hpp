#pragma once

#include "gazegrasp/arm_planner.hpp"
#include "gazegrasp/grammar.hpp"
#include "gazegrasp/scene.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace gazegrasp {

struct ExecutorLimits {
  double max_force = 50.0;             // N, attachment release threshold
  double max_torque = 5.0;             // N*m
  double min_grasp_force = 3.0;        // N
  double full_close_threshold = 0.95;  // flexion
  double stall_rate = 0.01;            // flexion/s
  double grasp_radius = 0.05;          // m, wrist to object surface
  double glove_rate = 1.0;             // flexion/s
  double contact_flexion = 0.55;       // flexion at which the glove meets an object
  double force_ramp = 20.0;            // N/s once in contact
  double max_tendon_force = 8.0;       // N
  double grasp_timeout = 2.0;          // s
  double release_open_threshold = 0.05;

  void validate() const;
};

struct ForceSpike {
  double t = 0.0;
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
};

struct FaultConfig {
  std::optional<ForceSpike> force_spike;
  std::vector<std::string> grasp_fail_on;  // each id fails its first grasp only
};

enum class GloveCommand { Open, Close };

struct GloveState {
  double tendon_force = 0.0;
  double flexion = 0.0;
  double flexion_rate = 0.0;  // measured over the last tick
  GloveCommand commanded = GloveCommand::Open;
  std::optional<double> contact_at;  // flexion where the closing glove meets an object
};

struct AttachmentState {
  bool magnet_on = true;
  Vec3 force = Vec3::Zero();
  Vec3 torque = Vec3::Zero();
};

enum class GraspOutcome { Success, EmptyClose, InsufficientForce };
const char* to_string(GraspOutcome outcome) noexcept;

// Sub-motion toward one waypoint, then an optional hold.
struct MotionSegment {
  Waypoint goal;
  double dwell = 0.0;
};

struct ExecutorState {
  Waypoint wrist;
  std::optional<PlanTracker> active;
  std::optional<std::string> held_object;
  Vec3 held_offset = Vec3::Zero();  // object center minus wrist
  GloveState glove;
  AttachmentState attachment;
  double clock = 0.0;

  // Progress inside the head symbol.
  bool symbol_started = false;
  std::vector<MotionSegment> segments;
  std::size_t segment_index = 0;
  Vec3 segment_start = Vec3::Zero();
  Vec3 segment_start_axis = Vec3::UnitX();
  double dwell_elapsed = 0.0;
  double symbol_elapsed = 0.0;
  bool poured = false;

  std::set<std::string> spent_faults;

  static ExecutorState at_home(const ArmConfig& cfg);
};

struct MotionInhibited : Error {
  using Error::Error;
};

struct NothingToRelease : ProtocolError {
  using ProtocolError::ProtocolError;
};

struct StepResult {
  ExecutorState state;
  Scene scene;
  std::vector<ExecutionFeedback> feedback;
};

enum class SafetyVerdict { Nominal, Release };

// Release iff |force| > max_force or |torque| > max_torque.
SafetyVerdict safety_check(const AttachmentState& attachment, const ExecutorLimits& limits);

// Grasp inference from glove signals: success iff the glove stalled short of full close
// while pulling at least min_grasp_force. Throws ProtocolError when the wrist is not within
// grasp_radius of the target or the glove is not closing.
GraspOutcome execute_grasp(const ExecutorState& state, const SceneObject& target, const ExecutorLimits& limits);

// Drops the held object into the LargeContainer under the wrist, else onto the table top.
std::pair<Scene, ExecutorState> apply_release(const ExecutorState& state, const Scene& scene);

// Moves the held small container's contents into dest, clamped at 1.
Scene apply_pour(const ExecutorState& state, const Scene& scene, const std::string& source_id,
                 const std::string& dest_id);

class Executor {
 public:
  Executor(ArmConfig arm, ExecutorLimits limits, FaultConfig faults = {})
      : arm_(std::move(arm)), limits_(limits), faults_(std::move(faults)) {}

  const ArmConfig& arm() const { return arm_; }
  const ExecutorLimits& limits() const { return limits_; }
  const FaultConfig& faults() const { return faults_; }
  FaultConfig& faults() { return faults_; }

  // Starts a plan; the previous one must be finished.
  ExecutorState begin(ExecutorState state, ActionPlan plan) const;

  // One tick of arm, glove, and plan progress. Throws MotionInhibited when the magnet is off.
  StepResult step(const ExecutorState& state, const Scene& scene, double dt) const;

  // Reads the attachment sensor over the tick (t_begin, t_end], applies the safety check,
  // and on Release drops the magnet and aborts the active plan.
  SafetyVerdict monitor(ExecutorState& state, double t_begin, double t_end) const;

 private:
  void start_symbol(ExecutorState& s, Scene& scene, const ActionSymbol& sym, std::vector<ExecutionFeedback>& fb) const;
  bool advance_motion(ExecutorState& s, Scene& scene, double dt) const;
  void update_glove(ExecutorState& s, double dt) const;
  void finish_symbol(ExecutorState& s, const ActionSymbol& sym, bool success, std::string cause,
                     std::vector<ExecutionFeedback>& fb) const;

  ArmConfig arm_;
  ExecutorLimits limits_;
  FaultConfig faults_;
};

}  // namespace gazegrasp
