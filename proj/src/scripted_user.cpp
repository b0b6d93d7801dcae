#include "gazegrasp/scripted_user.hpp"

#include "gazegrasp/raycast_batch.hpp"
#include "json_util.hpp"

#include <chrono>
#include <random>

namespace gazegrasp {

GazeScript gaze_script_from_json(const nlohmann::json& doc) {
  GazeScript script;
  const auto& steps = json_util::require_field(doc, "steps");
  if (!steps.is_array()) throw ParseError("steps: expected array");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string where = "steps[" + std::to_string(i) + "]";
    ScriptStep st;
    st.target = json_util::require<std::string>(steps[i], "target", where);
    if (steps[i].contains("look_at")) st.look_at = json_util::require_vec3(steps[i], "look_at", where);
    script.steps.push_back(std::move(st));
  }
  if (const auto it = doc.find("timing"); it != doc.end()) {
    auto& t = script.timing;
    t.settle = json_util::optional(*it, "settle", t.settle, "timing");
    t.fixate_timeout = json_util::optional(*it, "fixate_timeout", t.fixate_timeout, "timing");
    t.execute_timeout = json_util::optional(*it, "execute_timeout", t.execute_timeout, "timing");
    t.tail = json_util::optional(*it, "tail", t.tail, "timing");
    t.jitter = json_util::optional(*it, "jitter", t.jitter, "timing");
    t.max_attempts = json_util::optional(*it, "max_attempts", t.max_attempts, "timing");
    t.seed = json_util::optional(*it, "seed", t.seed, "timing");
  }
  return script;
}

GazeScript load_gaze_script(const std::filesystem::path& path) {
  return gaze_script_from_json(json_util::parse(json_util::read_file(path), "script"));
}

std::optional<Pixel> choose_fixation_pixel(const Session& session, const std::string& target,
                                           const std::optional<Vec3>& look_at, double margin) {
  const auto& cam = session.config().camera;
  const ProjectedObject* proj = nullptr;
  for (const auto& p : session.projected())
    if (p.id == target) proj = &p;
  if (!proj) return std::nullopt;
  Rect zone = intent_zone(proj->bbox, session.config().intent);
  zone = Rect{zone.x + margin, zone.y + margin, zone.w - 2 * margin, zone.h - 2 * margin};
  zone.w = std::min(zone.w, cam.width - 1.0 - zone.x);
  zone.h = std::min(zone.h, cam.height - 1.0 - zone.y);
  if (zone.w <= 0.0 || zone.h <= 0.0) return std::nullopt;

  Pixel aim{zone.x + zone.w / 2, zone.y + zone.h / 2};
  if (look_at) {
    if (auto px = cam.project(*look_at)) aim = *px;
  }
  const auto grid = pixel_grid(zone, 2.0);
  const auto hits = cast_batch(cam, session.scene(), grid);
  std::optional<Pixel> best;
  double best_d2 = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!hits[i] || hits[i]->object_id != target) continue;
    const double du = grid[i].u - aim.u, dv = grid[i].v - aim.v;
    const double d2 = du * du + dv * dv;
    if (!best || d2 < best_d2) {
      best = grid[i];
      best_d2 = d2;
    }
  }
  return best;
}

Pixel choose_neutral_pixel(const Session& session) {
  const auto& cam = session.config().camera;
  const double w = cam.width, h = cam.height;
  const Pixel candidates[] = {{w * 0.05, h * 0.05}, {w * 0.5, h * 0.03}, {w * 0.95, h * 0.05},
                              {w * 0.03, h * 0.5},  {w * 0.97, h * 0.5}, {w * 0.03, h * 0.97}};
  for (const auto& c : candidates) {
    bool clear = true;
    for (const auto& p : session.projected()) {
      const Rect grown{p.bbox.x - 30, p.bbox.y - 30, p.bbox.w + 60, p.bbox.h + 60};
      if (grown.contains(c.u, c.v)) clear = false;
    }
    if (clear) return c;
  }
  throw Error("scripted user: no neutral gaze location outside all bounding boxes");
}

namespace {

enum class Phase { Settle, Fixate, Execute, Tail };

}  // namespace

AuthoredTrace author_trace(const SessionConfig& cfg, const GazeScript& script) {
  const auto wall_start = std::chrono::steady_clock::now();
  const auto& timing = script.timing;
  Session session(cfg);
  std::mt19937 rng(timing.seed);
  auto jitter = [&] { return (static_cast<double>(rng() % 2001) / 1000.0 - 1.0) * timing.jitter; };

  AuthoredTrace out;
  std::size_t step = 0;
  int attempt = 1;
  Phase phase = script.steps.empty() ? Phase::Tail : Phase::Settle;
  double phase_start = 0.0;
  std::size_t log_mark = 0;
  Pixel aim = choose_neutral_pixel(session);

  auto enter = [&](Phase p) {
    phase = p;
    phase_start = session.clock();
  };

  while (true) {
    const double now = session.clock();
    const double elapsed = now - phase_start;
    const auto& st = step < script.steps.size() ? script.steps[step] : ScriptStep{};

    switch (phase) {
      case Phase::Settle:
        if (elapsed >= timing.settle && session.idle()) {
          const auto px = choose_fixation_pixel(session, st.target, st.look_at);
          if (!px) throw Error("scripted user: no fixation pixel on '" + st.target + "'");
          aim = *px;
          log_mark = session.log().size();
          enter(Phase::Fixate);
        }
        break;
      case Phase::Fixate: {
        bool parsed = false;
        for (std::size_t i = log_mark; i < session.log().size(); ++i) {
          const auto& e = session.log().events()[i];
          if (e.kind == EventKind::Parse) {
            if (e.data.contains("reject"))
              throw Error("scripted user: step on '" + st.target + "' rejected: " + e.data["reject"].get<std::string>());
            parsed = true;
          }
        }
        if (parsed) {
          aim = choose_neutral_pixel(session);
          log_mark = session.log().size();
          enter(Phase::Execute);
        } else if (elapsed > timing.fixate_timeout) {
          throw Error("scripted user: fixation on '" + st.target + "' produced no plan");
        }
        break;
      }
      case Phase::Execute:
        if (session.idle()) {
          bool failed = false;
          for (std::size_t i = log_mark; i < session.log().size(); ++i) {
            const auto& e = session.log().events()[i];
            if (e.kind == EventKind::Feedback && e.data["outcome"] == "Failure") failed = true;
          }
          if (failed) {
            if (++attempt > timing.max_attempts) throw Error("scripted user: step on '" + st.target + "' kept failing");
          } else {
            ++step;
            attempt = 1;
          }
          aim = choose_neutral_pixel(session);
          enter(step < script.steps.size() ? Phase::Settle : Phase::Tail);
        } else if (elapsed > timing.execute_timeout) {
          throw Error("scripted user: plan on '" + st.target + "' did not finish");
        }
        break;
      case Phase::Tail:
        break;
    }
    if (phase == Phase::Tail && elapsed >= timing.tail) break;

    const GazeSample sample{static_cast<double>(session.ticks() + 1) * cfg.dt, {aim.u + jitter(), aim.v + jitter()}, true};
    out.samples.push_back(sample);
    session.push_gaze(sample);
    session.tick();
  }

  out.result = ReplayResult{session.report(), session.log()};
  out.result.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return out;
}

}  // namespace gazegrasp
