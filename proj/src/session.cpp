#include "gazegrasp/session.hpp"

#include "gazegrasp/trace.hpp"
#include "json_util.hpp"

#include <chrono>
#include <stdexcept>

namespace gazegrasp {

namespace {

std::string class_name(const Scene& scene, const std::string& id) {
  const auto* obj = scene.find(id);
  return obj ? std::string(to_string(obj->cls)) : id;
}

nlohmann::json symbols_json(const std::vector<ActionSymbol>& seq) {
  auto arr = nlohmann::json::array();
  for (const auto& s : seq) arr.push_back(to_string(s));
  return arr;
}

nlohmann::json fixation_json(const Fixation& f) {
  return {{"u", f.centroid.u},
          {"v", f.centroid.v},
          {"start_t", f.start_t},
          {"duration", f.duration},
          {"dispersion", f.dispersion}};
}

}  // namespace

// ---------------------------------------------------------------------------
// Report

int SessionReport::first_attempt_successes() const {
  int n = 0;
  for (const auto& t : tasks) n += t.first_attempt_success ? 1 : 0;
  return n;
}

int SessionReport::completed() const {
  int n = 0;
  for (const auto& t : tasks) n += t.completed ? 1 : 0;
  return n;
}

nlohmann::json SessionReport::to_json() const {
  auto arr = nlohmann::json::array();
  for (const auto& t : tasks) {
    auto actions = nlohmann::json::array();
    for (const auto& a : t.actions) actions.push_back({{"symbol", a.symbol}, {"outcome", a.outcome}, {"t", a.t}});
    arr.push_back({{"label", t.label},
                   {"object", t.object_id},
                   {"attempts", t.attempts},
                   {"first_attempt_success", t.first_attempt_success},
                   {"completed", t.completed},
                   {"actions", std::move(actions)},
                   {"start_t", t.start_t},
                   {"end_t", t.end_t},
                   {"sim_time", t.end_t - t.start_t}});
  }
  const double n = static_cast<double>(tasks.size());
  return {{"tasks", std::move(arr)},
          {"summary",
           {{"tasks", tasks.size()},
            {"completed", completed()},
            {"first_attempt_successes", first_attempt_successes()},
            {"first_attempt_success_rate", tasks.empty() ? 0.0 : first_attempt_successes() / n},
            {"sim_time", sim_time},
            {"wall_time", wall_time}}}};
}

void TaskRecorder::close_open(double t) {
  if (!open_) return;
  open_->end_t = t;
  done_.push_back(std::move(*open_));
  open_.reset();
  retry_pending_ = false;
  had_failure_ = false;
}

void TaskRecorder::on_plan(const ActionPlan& plan, const Scene& scene, double t) {
  const auto& first = plan.sequence.front();
  if (first.kind != SymbolKind::Reach) return;
  if (open_ && retry_pending_ && open_->object_id == first.target) {
    ++open_->attempts;
    retry_pending_ = false;
    return;
  }
  close_open(t);
  TaskRecord rec;
  rec.label = "Grasp " + class_name(scene, first.target);
  rec.object_id = first.target;
  rec.start_t = t;
  open_ = std::move(rec);
}

void TaskRecorder::on_reject(const std::string& target, RejectReason reason, double t) {
  if (!open_) return;
  open_->actions.push_back({"Parse(" + target + ")", "Rejected:" + std::string(to_string(reason)), t});
}

void TaskRecorder::on_feedback(const ExecutionFeedback& fb, const Scene& scene, double t) {
  if (!open_) return;
  const auto& sym = fb.completed;
  open_->actions.push_back({to_string(sym), fb.success ? "Success" : fb.cause, t});
  if (!fb.success) {
    had_failure_ = true;
    if (sym.kind == SymbolKind::Grasp) retry_pending_ = true;
    return;
  }
  switch (sym.kind) {
    case SymbolKind::Transport:
      last_transport_ = sym.target;
      break;
    case SymbolKind::Pour:
      open_->label += ", pour into " + class_name(scene, sym.target);
      break;
    case SymbolKind::Release: {
      const auto* dest = scene.find(last_transport_);
      const bool into = dest && dest->kind() == ContainerKind::LargeContainer;
      open_->label += (into ? ", drop in " : ", drop on ") + class_name(scene, last_transport_);
      break;
    }
    case SymbolKind::Home:
      open_->completed = true;
      open_->first_attempt_success = open_->attempts == 1 && !had_failure_;
      close_open(t);
      break;
    default:
      break;
  }
}

void TaskRecorder::on_safety_release(double t) {
  if (open_) open_->actions.push_back({"Safety", "Release", t});
  close_open(t);
}

SessionReport TaskRecorder::finish(double sim_time) const {
  SessionReport r;
  r.tasks = done_;
  if (open_) {
    r.tasks.push_back(*open_);
    r.tasks.back().end_t = sim_time;
  }
  r.sim_time = sim_time;
  return r;
}

// ---------------------------------------------------------------------------
// Session

Session::Session(SessionConfig cfg)
    : cfg_(std::move(cfg)),
      scene_(cfg_.scene),
      executor_(cfg_.arm, cfg_.limits, cfg_.faults),
      exec_state_(ExecutorState::at_home(cfg_.arm)),
      window_(cfg_.fixation),
      decoder_(cfg_.intent) {
  cfg_.validate();
  project_scene();
}

void Session::reset() {
  scene_ = cfg_.scene;
  executor_ = Executor(cfg_.arm, cfg_.limits, cfg_.faults);
  exec_state_ = ExecutorState::at_home(cfg_.arm);
  hand_ = HandEmpty{};
  window_ = GazeWindow(cfg_.fixation);
  decoder_ = IntentDecoder(cfg_.intent);
  queue_.clear();
  fixation_.reset();
  log_.clear();
  recorder_ = TaskRecorder{};
  ticks_ = 0;
  last_gaze_t_ = -1.0;
  project_scene();
}

void Session::push_gaze(const GazeSample& sample) {
  if (!(sample.t > last_gaze_t_)) throw DomainError("gaze samples must have strictly increasing t");
  last_gaze_t_ = sample.t;
  queue_.push_back(sample);
}

void Session::push_live_gaze(const Pixel& px) {
  push_gaze({std::max(clock(), last_gaze_t_ + 1e-6), px, true});
}

void Session::inject_faults(const FaultConfig& faults) {
  auto& f = executor_.faults();
  if (faults.force_spike) f.force_spike = faults.force_spike;
  for (const auto& id : faults.grasp_fail_on) {
    if (!scene_.find(id)) throw ValidationError("inject_fault: unknown object id '" + id + "'");
    f.grasp_fail_on.push_back(id);
  }
}

void Session::project_scene() {
  projected_.clear();
  for (const auto& obj : scene_.objects)
    if (auto bbox = project_bbox(cfg_.camera, obj)) projected_.push_back({obj.id, *bbox});
}

void Session::handle_intent(const IntentEvent& intent) {
  const double now = clock();
  log_.append(now, EventKind::Fixation, [&] {
    auto j = fixation_json(*fixation_);
    j["phase"] = "dwell";
    return j;
  }());
  log_.append(now, EventKind::Intent,
              {{"object", intent.object_id},
               {"u", fixation_->centroid.u},
               {"v", fixation_->centroid.v},
               {"point", json_util::vec3(intent.gaze_hit.point)},
               {"ray_t", intent.gaze_hit.ray_t}});

  if (!exec_state_.attachment.magnet_on) {
    log_.append(now, EventKind::IntentIgnored, {{"object", intent.object_id}, {"reason", "MotionInhibited"}});
    return;
  }
  if (exec_state_.active) {
    log_.append(now, EventKind::IntentIgnored, {{"object", intent.object_id}, {"reason", "PlanActive"}});
    return;
  }
  auto parsed = cfg_.grammar.parse(hand_, intent, scene_);
  if (auto* reason = std::get_if<RejectReason>(&parsed)) {
    log_.append(now, EventKind::Parse,
                {{"hand_state", to_string(hand_)}, {"object", intent.object_id}, {"reject", to_string(*reason)}});
    recorder_.on_reject(intent.object_id, *reason, now);
    return;
  }
  auto& plan = std::get<ActionPlan>(parsed);
  log_.append(now, EventKind::Parse,
              {{"hand_state", to_string(hand_)}, {"object", intent.object_id}, {"plan", symbols_json(plan.sequence)}});
  recorder_.on_plan(plan, scene_, now);
  exec_state_ = executor_.begin(std::move(exec_state_), std::move(plan));
}

void Session::check_coherence() const {
  const auto* holding = std::get_if<Holding>(&hand_);
  const auto& held = exec_state_.held_object;
  const bool ok = holding ? (held && *held == holding->object_id) : !held.has_value();
  if (!ok)
    throw std::logic_error("internal invariant violated: hand state " + to_string(hand_) + " vs executor held object '" +
                           held.value_or("") + "'");
}

void Session::tick() {
  const double t_begin = clock();
  ++ticks_;
  const double now = clock();

  while (!queue_.empty() && queue_.front().t <= now + 1e-9) {
    GazeSample s = queue_.front();
    queue_.pop_front();
    if (s.valid && !cfg_.camera.in_image(s.px)) s.valid = false;
    log_.append(now, EventKind::GazeSample, {{"t", s.t}, {"u", s.px.u}, {"v", s.px.v}, {"valid", s.valid}});
    window_.push(s);
  }

  const auto fix = window_.fixation();
  if (fix && !fixation_) {
    auto j = fixation_json(*fix);
    j["phase"] = "onset";
    log_.append(now, EventKind::Fixation, std::move(j));
  }
  fixation_ = fix;

  project_scene();
  std::optional<GazeHit> hit;
  if (fix) hit = intersect_scene(cast_gaze_ray(cfg_.camera, fix->centroid), scene_);
  if (const auto intent = decoder_.update(fix, projected_, hit)) handle_intent(*intent);

  const bool was_on = exec_state_.attachment.magnet_on;
  if (executor_.monitor(exec_state_, t_begin, now) == SafetyVerdict::Release && was_on) {
    const auto& a = exec_state_.attachment;
    log_.append(now, EventKind::Safety,
                {{"action", "Release"},
                 {"force", json_util::vec3(a.force)},
                 {"torque", json_util::vec3(a.torque)},
                 {"magnet_on", false}});
    recorder_.on_safety_release(now);
  }

  if (exec_state_.attachment.magnet_on) {
    auto r = executor_.step(exec_state_, scene_, cfg_.dt);
    exec_state_ = std::move(r.state);
    scene_ = std::move(r.scene);
    for (const auto& fb : r.feedback) {
      log_.append(now, EventKind::Feedback,
                  {{"symbol", to_string(fb.completed)},
                   {"outcome", fb.success ? "Success" : "Failure"},
                   {"cause", fb.cause}});
      const HandState next = advance_state(hand_, fb, scene_);
      if (next != hand_) {
        log_.append(now, EventKind::StateChange, {{"from", to_string(hand_)}, {"to", to_string(next)}});
        hand_ = next;
      }
      recorder_.on_feedback(fb, scene_, now);
    }
  }
  if (exec_state_.active && exec_state_.active->finished()) exec_state_.active.reset();
  check_coherence();
}

nlohmann::json Session::snapshot(std::size_t last_events) const {
  const auto& w = exec_state_.wrist;
  nlohmann::json plan = nullptr;
  if (exec_state_.active)
    plan = {{"symbols", symbols_json(exec_state_.active->plan().sequence)},
            {"index", exec_state_.active->progress()}};

  auto objects = nlohmann::json::array();
  for (const auto& o : scene_.objects)
    objects.push_back({{"id", o.id},
                       {"class", to_string(o.cls)},
                       {"center", json_util::vec3(o.aabb.center)},
                       {"half_extents", json_util::vec3(o.aabb.half_extents)},
                       {"contents", o.contents ? nlohmann::json(*o.contents) : nlohmann::json(nullptr)}});
  auto bboxes = nlohmann::json::array();
  auto zones = nlohmann::json::array();
  for (const auto& p : projected_) {
    auto b = json_util::rect(p.bbox);
    b["id"] = p.id;
    bboxes.push_back(std::move(b));
    auto z = json_util::rect(intent_zone(p.bbox, cfg_.intent));
    z["id"] = p.id;
    zones.push_back(std::move(z));
  }
  auto recent = nlohmann::json::array();
  const auto& ev = log_.events();
  for (auto it = ev.rbegin(); it != ev.rend() && recent.size() < last_events; ++it)
    if (it->kind != EventKind::GazeSample) recent.insert(recent.begin(), it->to_json());

  return {{"v", 1},
          {"type", "snapshot"},
          {"t", clock()},
          {"wrist", json_util::vec3(w.wrist)},
          {"roll", w.wrist_roll},
          {"hand_state", to_string(hand_)},
          {"plan", std::move(plan)},
          {"objects", std::move(objects)},
          {"bboxes", std::move(bboxes)},
          {"intent_zones", std::move(zones)},
          {"fixation", fixation_ ? fixation_json(*fixation_) : nlohmann::json(nullptr)},
          {"magnet_on", exec_state_.attachment.magnet_on},
          {"last_events", std::move(recent)}};
}

ReplayResult run_replay(const SessionConfig& cfg, const std::vector<GazeSample>& trace, double drain_limit) {
  const auto wall_start = std::chrono::steady_clock::now();
  Session session(cfg);
  for (const auto& s : trace) session.push_gaze(s);
  const double end_t = trace.empty() ? 0.0 : trace.back().t;
  while (session.pending_input() || session.clock() < end_t) session.tick();
  const double limit = session.clock() + drain_limit;
  while (!session.idle() && session.executor_state().attachment.magnet_on && session.clock() < limit) session.tick();
  ReplayResult r{session.report(), session.log()};
  r.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return r;
}

ReplayResult run_replay(const SessionConfig& cfg) {
  const auto* mode = std::get_if<ReplayMode>(&cfg.mode);
  if (!mode) throw ValidationError("run_replay requires replay mode");
  return run_replay(cfg, read_trace(mode->trace));
}

}  // namespace gazegrasp
