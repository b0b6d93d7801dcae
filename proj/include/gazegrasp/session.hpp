#pragma once

#include "gazegrasp/config.hpp"
#include "gazegrasp/event_log.hpp"
#include "gazegrasp/executor.hpp"
#include "gazegrasp/grammar.hpp"
#include "gazegrasp/intent.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace gazegrasp {

struct ActionRecord {
  std::string symbol;
  std::string outcome;  // "Success", a failure cause, or "Rejected:<reason>"
  double t = 0.0;
};

struct TaskRecord {
  std::string label;  // e.g. "Grasp Cup, pour into Bowl, drop on Table"
  std::string object_id;
  int attempts = 1;
  bool first_attempt_success = false;
  bool completed = false;
  std::vector<ActionRecord> actions;
  double start_t = 0.0;
  double end_t = 0.0;
};

struct SessionReport {
  std::vector<TaskRecord> tasks;
  double sim_time = 0.0;
  double wall_time = 0.0;

  int first_attempt_successes() const;
  int completed() const;
  nlohmann::json to_json() const;
};

// Segments the action stream into tasks. A task opens with a Reach plan, collects later
// plans, and closes on Home completion. After a failed grasp the next Reach plan on the
// same object counts as another attempt of the same task.
class TaskRecorder {
 public:
  void on_plan(const ActionPlan& plan, const Scene& scene, double t);
  void on_reject(const std::string& target, RejectReason reason, double t);
  void on_feedback(const ExecutionFeedback& fb, const Scene& scene, double t);
  void on_safety_release(double t);
  SessionReport finish(double sim_time) const;

 private:
  void close_open(double t);
  std::vector<TaskRecord> done_;
  std::optional<TaskRecord> open_;
  bool retry_pending_ = false;
  bool had_failure_ = false;
  std::string last_transport_;
};

// One authoritative session: gaze -> fixation -> intent -> parse -> plan -> execute.
class Session {
 public:
  explicit Session(SessionConfig cfg);

  const SessionConfig& config() const { return cfg_; }

  // Ingestion queue; drained by tick() up to the new clock value.
  void push_gaze(const GazeSample& sample);
  // Live inputs: stamped with the current session clock.
  void push_live_gaze(const Pixel& px);
  void inject_faults(const FaultConfig& faults);
  void reset();

  void tick();

  double clock() const { return static_cast<double>(ticks_) * cfg_.dt; }
  std::uint64_t ticks() const { return ticks_; }
  bool idle() const { return !exec_state_.active; }
  bool pending_input() const { return !queue_.empty(); }

  const Scene& scene() const { return scene_; }
  const HandState& hand_state() const { return hand_; }
  const ExecutorState& executor_state() const { return exec_state_; }
  const EventLog& log() const { return log_; }
  const std::optional<Fixation>& fixation() const { return fixation_; }
  const std::vector<ProjectedObject>& projected() const { return projected_; }
  SessionReport report() const { return recorder_.finish(clock()); }

  // Snapshot frame for live clients (wire protocol v1).
  nlohmann::json snapshot(std::size_t last_events = 8) const;

 private:
  void project_scene();
  void handle_intent(const IntentEvent& intent);
  void check_coherence() const;

  SessionConfig cfg_;
  Scene scene_;
  Executor executor_;
  ExecutorState exec_state_;
  HandState hand_ = HandEmpty{};
  GazeWindow window_;
  IntentDecoder decoder_;
  std::deque<GazeSample> queue_;
  std::optional<Fixation> fixation_;
  std::vector<ProjectedObject> projected_;
  EventLog log_;
  TaskRecorder recorder_;
  std::uint64_t ticks_ = 0;
  double last_gaze_t_ = -1.0;
};

struct ReplayResult {
  SessionReport report;
  EventLog log;
};

// Feeds the whole trace through a fresh session, then keeps ticking until the active
// plan finishes (bounded by `drain_limit` seconds of simulated time).
ReplayResult run_replay(const SessionConfig& cfg, const std::vector<GazeSample>& trace, double drain_limit = 120.0);
ReplayResult run_replay(const SessionConfig& cfg);  // reads ReplayMode trace

}  // namespace gazegrasp
