#include "gazegrasp/executor.hpp"

#include <algorithm>
#include <cmath>

namespace gazegrasp {

namespace {
constexpr double kWaypointTolerance = 1e-6;

const SceneObject* container_below(const Scene& scene, const Vec3& p) {
  const SceneObject* best = nullptr;
  for (const auto& obj : scene.objects) {
    if (obj.kind() != ContainerKind::LargeContainer) continue;
    const Vec3 d = (p - obj.aabb.center).cwiseAbs();
    if (d.x() <= obj.aabb.half_extents.x() && d.y() <= obj.aabb.half_extents.y() && p.z() >= obj.aabb.bottom()) {
      if (!best || obj.aabb.top() > best->aabb.top()) best = &obj;
    }
  }
  return best;
}
}  // namespace

void ExecutorLimits::validate() const {
  if (!(max_force > 0.0 && max_torque > 0.0)) throw ValidationError("limits: force/torque thresholds must be positive");
  if (!(min_grasp_force > 0.0)) throw ValidationError("limits.min_grasp_force must be positive");
  if (!(full_close_threshold > 0.0 && full_close_threshold <= 1.0))
    throw ValidationError("limits.full_close_threshold must lie in (0, 1]");
  if (!(contact_flexion > 0.0 && contact_flexion < full_close_threshold))
    throw ValidationError("limits.contact_flexion must lie below full_close_threshold");
  if (!(stall_rate > 0.0 && glove_rate > 0.0 && force_ramp > 0.0 && max_tendon_force > 0.0))
    throw ValidationError("limits: glove rates and forces must be positive");
  if (!(grasp_radius >= 0.0 && grasp_timeout > 0.0)) throw ValidationError("limits: bad grasp radius or timeout");
}

const char* to_string(GraspOutcome outcome) noexcept {
  switch (outcome) {
    case GraspOutcome::Success: return "Success";
    case GraspOutcome::EmptyClose: return "EmptyClose";
    case GraspOutcome::InsufficientForce: return "InsufficientForce";
  }
  return "?";
}

ExecutorState ExecutorState::at_home(const ArmConfig& cfg) {
  ExecutorState s;
  s.wrist = home_pose(cfg);
  return s;
}

SafetyVerdict safety_check(const AttachmentState& attachment, const ExecutorLimits& limits) {
  if (attachment.force.norm() > limits.max_force || attachment.torque.norm() > limits.max_torque)
    return SafetyVerdict::Release;
  return SafetyVerdict::Nominal;
}

GraspOutcome execute_grasp(const ExecutorState& state, const SceneObject& target, const ExecutorLimits& limits) {
  if (target.aabb.distance(state.wrist.wrist) > limits.grasp_radius)
    throw ProtocolError("grasp on '" + target.id + "': wrist not within grasp radius (reach must precede grasp)");
  if (state.glove.commanded != GloveCommand::Close) throw ProtocolError("grasp inference requires a closing glove");
  const auto& g = state.glove;
  if (g.flexion >= limits.full_close_threshold) return GraspOutcome::EmptyClose;
  const bool stalled = std::abs(g.flexion_rate) < limits.stall_rate;
  if (stalled && g.tendon_force >= limits.min_grasp_force) return GraspOutcome::Success;
  return GraspOutcome::InsufficientForce;
}

std::pair<Scene, ExecutorState> apply_release(const ExecutorState& state, const Scene& scene) {
  if (!state.held_object) throw NothingToRelease("release with an empty hand");
  Scene out = scene;
  ExecutorState s = state;
  auto& obj = out.at(*state.held_object);
  if (const auto* bin = container_below(scene, state.wrist.wrist); bin && bin->id != obj.id) {
    const double rest = std::min(obj.aabb.half_extents.z(), bin->aabb.half_extents.z());
    obj.aabb.center = Vec3(bin->aabb.center.x(), bin->aabb.center.y(), bin->aabb.bottom() + rest);
  } else {
    obj.aabb.center.z() = scene.table_height + obj.aabb.half_extents.z();
  }
  s.held_object.reset();
  s.held_offset = Vec3::Zero();
  s.glove.commanded = GloveCommand::Open;
  s.glove.contact_at.reset();
  return {std::move(out), std::move(s)};
}

Scene apply_pour(const ExecutorState& state, const Scene& scene, const std::string& source_id,
                 const std::string& dest_id) {
  Scene out = scene;
  auto& source = out.at(source_id);
  auto& dest = out.at(dest_id);
  if (dest.kind() != ContainerKind::LargeContainer) throw ProtocolError("pour destination '" + dest_id + "' is not a large container");
  if (source.kind() != ContainerKind::SmallContainer || state.held_object != source_id)
    throw ProtocolError("pour source '" + source_id + "' is not a held small container");
  dest.contents = std::min(1.0, *dest.contents + *source.contents);
  source.contents = 0.0;
  return out;
}

ExecutorState Executor::begin(ExecutorState state, ActionPlan plan) const {
  if (state.active && !state.active->finished()) throw ProtocolError("a plan is already active");
  if (!plan_order_valid(plan.sequence)) throw ProtocolError("plan violates ordering constraints");
  state.active.emplace(std::move(plan));
  state.symbol_started = false;
  state.segments.clear();
  state.segment_index = 0;
  return state;
}

SafetyVerdict Executor::monitor(ExecutorState& state, double t_begin, double t_end) const {
  state.attachment.force = Vec3::Zero();
  state.attachment.torque = Vec3::Zero();
  if (const auto& spike = faults_.force_spike; spike && spike->t > t_begin && spike->t <= t_end) {
    state.attachment.force = spike->force;
    state.attachment.torque = spike->torque;
  }
  if (!state.attachment.magnet_on) return SafetyVerdict::Release;
  const auto verdict = safety_check(state.attachment, limits_);
  if (verdict == SafetyVerdict::Release) {
    state.attachment.magnet_on = false;
    if (state.active) state.active->abort();
    state.segments.clear();
    state.symbol_started = false;
  }
  return verdict;
}

void Executor::update_glove(ExecutorState& s, double dt) const {
  auto& g = s.glove;
  const double before = g.flexion;
  if (g.commanded == GloveCommand::Close) {
    if (g.contact_at && g.flexion >= *g.contact_at) {
      g.flexion = *g.contact_at;
      g.tendon_force = std::min(limits_.max_tendon_force, g.tendon_force + limits_.force_ramp * dt);
    } else {
      g.flexion = std::min(1.0, g.flexion + limits_.glove_rate * dt);
      if (g.contact_at) g.flexion = std::min(g.flexion, *g.contact_at);
    }
  } else {
    g.flexion = std::max(0.0, g.flexion - limits_.glove_rate * dt);
    g.tendon_force = 0.0;
  }
  g.flexion_rate = (g.flexion - before) / dt;
}

void Executor::finish_symbol(ExecutorState& s, const ActionSymbol& sym, bool success, std::string cause,
                             std::vector<ExecutionFeedback>& fb) const {
  ExecutionFeedback f{sym, success, std::move(cause)};
  s.active->feed(f);
  fb.push_back(std::move(f));
  s.symbol_started = false;
  s.segments.clear();
  s.segment_index = 0;
  s.dwell_elapsed = 0.0;
  s.symbol_elapsed = 0.0;
  s.poured = false;
}

void Executor::start_symbol(ExecutorState& s, Scene& scene, const ActionSymbol& sym,
                            std::vector<ExecutionFeedback>& fb) const {
  s.symbol_started = true;
  s.segments.clear();
  s.segment_index = 0;
  s.dwell_elapsed = 0.0;
  s.symbol_elapsed = 0.0;
  s.poured = false;
  auto load = [&s](const std::vector<Waypoint>& wps) {
    for (const auto& w : wps) s.segments.push_back({w, 0.0});
    s.segment_start = s.wrist.wrist;
    s.segment_start_axis = s.wrist.forearm_axis;
  };
  try {
    switch (sym.kind) {
      case SymbolKind::Reach:
        load(reach_waypoints(arm_, scene.at(sym.target).aabb.center));
        break;
      case SymbolKind::Transport: {
        const auto& target = scene.at(sym.target);
        std::optional<Eigen::Vector2d> drop_xy;
        if (target.kind() == ContainerKind::Surface) drop_xy = s.active->plan().provoking_intent.gaze_hit.point.head<2>();
        load(transport_waypoints(arm_, s.wrist, target, drop_xy));
        break;
      }
      case SymbolKind::Pour: {
        load(pour_waypoints(arm_, s.wrist));
        s.segments[1].dwell = arm_.pour_hold;
        break;
      }
      case SymbolKind::Home:
        load({home_pose(arm_)});
        break;
      case SymbolKind::Grasp: {
        const auto& target = scene.at(sym.target);
        if (target.aabb.distance(s.wrist.wrist) > limits_.grasp_radius) {
          finish_symbol(s, sym, false, "OutOfGraspRadius", fb);
          return;
        }
        s.glove.commanded = GloveCommand::Close;
        s.glove.tendon_force = 0.0;
        const bool forced_fail = std::find(faults_.grasp_fail_on.begin(), faults_.grasp_fail_on.end(), target.id) !=
                                     faults_.grasp_fail_on.end() &&
                                 !s.spent_faults.contains(target.id);
        if (forced_fail) {
          s.spent_faults.insert(target.id);
          s.glove.contact_at.reset();
        } else {
          s.glove.contact_at = limits_.contact_flexion;
        }
        break;
      }
      case SymbolKind::Release:
        if (!s.held_object) throw NothingToRelease("release with an empty hand");
        s.glove.commanded = GloveCommand::Open;
        s.glove.contact_at.reset();
        break;
    }
  } catch (const PlanningError& e) {
    finish_symbol(s, sym, false, to_string(e.code), fb);
  }
}

// Moves toward the current segment goal; true once every segment is reached and held.
// Arriving at a waypoint or finishing a hold consumes the rest of the tick.
bool Executor::advance_motion(ExecutorState& s, Scene& scene, double dt) const {
  if (s.segment_index >= s.segments.size()) return true;
  const auto& seg = s.segments[s.segment_index];
  auto next_segment = [&s] {
    ++s.segment_index;
    s.dwell_elapsed = 0.0;
    s.segment_start = s.wrist.wrist;
    s.segment_start_axis = s.wrist.forearm_axis;
    return s.segment_index == s.segments.size();
  };
  auto carry = [&] {
    if (s.held_object) scene.at(*s.held_object).aabb.center = s.wrist.wrist + s.held_offset;
  };

  const bool at_goal =
      (seg.goal.wrist - s.wrist.wrist).norm() <= kWaypointTolerance && s.wrist.wrist_roll == seg.goal.wrist_roll;
  if (at_goal) {
    s.dwell_elapsed += dt;
    if (s.dwell_elapsed + 1e-9 < seg.dwell) return false;
    return next_segment();
  }

  const Vec3 to_goal = seg.goal.wrist - s.wrist.wrist;
  const double dist = to_goal.norm();
  const double step = arm_.approach_speed * dt;
  s.wrist.wrist = dist <= step ? seg.goal.wrist : Vec3(s.wrist.wrist + to_goal * (step / dist));

  const double roll_gap = seg.goal.wrist_roll - s.wrist.wrist_roll;
  const double roll_step = arm_.roll_rate * dt;
  s.wrist.wrist_roll =
      std::abs(roll_gap) <= roll_step ? seg.goal.wrist_roll : s.wrist.wrist_roll + std::copysign(roll_step, roll_gap);

  const double remaining = (seg.goal.wrist - s.wrist.wrist).norm();
  const bool reached = remaining <= kWaypointTolerance && s.wrist.wrist_roll == seg.goal.wrist_roll;
  if (reached) {
    s.wrist.wrist = seg.goal.wrist;
    s.wrist.forearm_axis = seg.goal.forearm_axis;
  } else {
    const double span = (seg.goal.wrist - s.segment_start).norm();
    const double frac = span > kWaypointTolerance ? 1.0 - remaining / span : 1.0;
    const Vec3 blend = (1.0 - frac) * s.segment_start_axis + frac * seg.goal.forearm_axis;
    s.wrist.forearm_axis = blend.norm() > 1e-9 ? Vec3(blend.normalized()) : seg.goal.forearm_axis;
  }
  carry();
  if (!reached || seg.dwell > 0.0) return false;
  return next_segment();
}

StepResult Executor::step(const ExecutorState& state, const Scene& scene, double dt) const {
  if (!(dt > 0.0)) throw DomainError("step: dt must be positive");
  if (!state.attachment.magnet_on) throw MotionInhibited("arm attachment released; motion inhibited");
  StepResult r{state, scene, {}};
  auto& s = r.state;
  s.clock += dt;
  update_glove(s, dt);

  if (!s.active || s.active->finished()) return r;
  const ActionSymbol sym = *s.active->head();
  if (!s.symbol_started) {
    start_symbol(s, r.scene, sym, r.feedback);
    if (!s.symbol_started) return r;  // failed at start
  }
  s.symbol_elapsed += dt;

  switch (sym.kind) {
    case SymbolKind::Grasp: {
      const auto& g = s.glove;
      const bool stalled = g.contact_at && std::abs(g.flexion_rate) < limits_.stall_rate;
      const bool settled = g.flexion >= limits_.full_close_threshold ||
                           (stalled && g.tendon_force >= limits_.min_grasp_force) ||
                           s.symbol_elapsed >= limits_.grasp_timeout;
      if (!settled) break;
      const auto& target = r.scene.at(sym.target);
      const auto outcome = execute_grasp(s, target, limits_);
      if (outcome == GraspOutcome::Success) {
        s.held_object = target.id;
        s.held_offset = target.aabb.center - s.wrist.wrist;
        finish_symbol(s, sym, true, {}, r.feedback);
      } else {
        s.glove.commanded = GloveCommand::Open;
        s.glove.contact_at.reset();
        finish_symbol(s, sym, false, to_string(outcome), r.feedback);
      }
      break;
    }
    case SymbolKind::Release:
      // The object leaves the hand once the glove has opened.
      if (s.glove.flexion <= limits_.release_open_threshold) {
        auto [next_scene, next_state] = apply_release(s, r.scene);
        r.scene = std::move(next_scene);
        s = std::move(next_state);
        finish_symbol(s, sym, true, {}, r.feedback);
      }
      break;
    case SymbolKind::Pour: {
      const bool done = advance_motion(s, r.scene, dt);
      // Contents move once the hold at full roll is over.
      if (!s.poured && s.segment_index >= 2) {
        r.scene = apply_pour(s, r.scene, *s.held_object, sym.target);
        s.poured = true;
      }
      if (done) finish_symbol(s, sym, true, {}, r.feedback);
      break;
    }
    default:
      if (advance_motion(s, r.scene, dt)) finish_symbol(s, sym, true, {}, r.feedback);
      break;
  }
  if (s.active->finished() && s.active->aborted()) s.segments.clear();
  return r;
}

}  // namespace gazegrasp
