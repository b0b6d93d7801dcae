#include "gazegrasp/executor.hpp"

#include <doctest.h>

using namespace gazegrasp;
using K = SymbolKind;

namespace {

Scene dining() { return load_scene_file(std::string(GAZEGRASP_DATA_DIR) + "/dining_scene.json"); }

ActionPlan plan(std::vector<ActionSymbol> seq, const std::string& target = "orange", Vec3 hit = Vec3::Zero()) {
  return {std::move(seq), {0.0, target, {hit, target, 1.0}}};
}

// Runs until the plan finishes; returns all feedback.
std::vector<ExecutionFeedback> run(const Executor& ex, ExecutorState& s, Scene& scene, double dt = 1.0 / 60) {
  std::vector<ExecutionFeedback> all;
  for (int i = 0; i < 100000 && s.active && !s.active->finished(); ++i) {
    auto r = ex.step(s, scene, dt);
    s = std::move(r.state);
    scene = std::move(r.scene);
    all.insert(all.end(), r.feedback.begin(), r.feedback.end());
  }
  return all;
}

ExecutorState holding(const Scene& scene, const std::string& id, const Vec3& wrist) {
  ExecutorState s;
  s.wrist.wrist = wrist;
  s.held_object = id;
  s.held_offset = scene.at(id).aabb.center - wrist;
  s.glove.commanded = GloveCommand::Close;
  return s;
}

}  // namespace

TEST_CASE("wrist moves at the approach speed and clamps at the waypoint") {
  ArmConfig arm;
  const Executor ex(arm, {});
  const auto scene = dining();
  auto s = ex.begin(ExecutorState::at_home(arm), plan({{K::Home, ""}}));
  s.symbol_started = true;
  s.wrist.wrist = home_pose(arm).wrist + Vec3(0, 0.3, 0.4);
  s.segment_start = s.wrist.wrist;
  s.segments = {{home_pose(arm), 0.0}};

  const auto a = ex.step(s, scene, 0.1);
  const Vec3 moved = a.state.wrist.wrist - s.wrist.wrist;
  CHECK(moved.norm() == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(moved.normalized().dot(Vec3(0, -0.6, -0.8)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(a.feedback.empty());

  const auto b = ex.step(s, scene, 0.1);
  CHECK(a.state.wrist.wrist == b.state.wrist.wrist);
  CHECK(a.state.glove.flexion == b.state.glove.flexion);

  const auto c = ex.step(s, scene, 10.0);
  CHECK(c.state.wrist.wrist == home_pose(arm).wrist);
  REQUIRE(c.feedback.size() == 1);
  CHECK(c.feedback[0].completed.kind == K::Home);
  CHECK(c.feedback[0].success);

  CHECK_THROWS_AS(ex.step(s, scene, 0.0), DomainError);
}

TEST_CASE("grasp inference from glove signals") {
  const ExecutorLimits lim;
  const auto scene = dining();
  const auto& orange = scene.at("orange");
  ExecutorState s;
  s.wrist.wrist = orange.aabb.center - Vec3(0.04, 0, 0);
  s.glove.commanded = GloveCommand::Close;

  s.glove.flexion = 0.55;
  s.glove.flexion_rate = 0.0;
  s.glove.tendon_force = 8.0;
  CHECK(execute_grasp(s, orange, lim) == GraspOutcome::Success);
  s.glove.tendon_force = 1.0;
  CHECK(execute_grasp(s, orange, lim) == GraspOutcome::InsufficientForce);
  s.glove.flexion = 0.98;
  CHECK(execute_grasp(s, orange, lim) == GraspOutcome::EmptyClose);

  s.wrist.wrist = orange.aabb.center + Vec3(0, 0, 0.2);
  CHECK_THROWS_AS(execute_grasp(s, orange, lim), ProtocolError);
}

TEST_CASE("reach then grasp picks up the orange") {
  ArmConfig arm;
  const Executor ex(arm, {});
  auto scene = dining();
  auto s = ex.begin(ExecutorState::at_home(arm), plan({{K::Reach, "orange"}, {K::Grasp, "orange"}}));
  const auto fb = run(ex, s, scene);
  REQUIRE(fb.size() == 2);
  CHECK(fb[0].success);
  CHECK(fb[1].success);
  CHECK(s.held_object == "orange");
  CHECK((s.wrist.wrist - scene.at("orange").aabb.center).norm() < 1e-9);
  CHECK(s.glove.tendon_force >= ExecutorLimits{}.min_grasp_force);
}

TEST_CASE("injected grasp failure is spent after one use") {
  ArmConfig arm;
  FaultConfig faults;
  faults.grasp_fail_on = {"orange"};
  const Executor ex(arm, {}, faults);
  auto scene = dining();
  auto s = ex.begin(ExecutorState::at_home(arm), plan({{K::Reach, "orange"}, {K::Grasp, "orange"}}));
  auto fb = run(ex, s, scene);
  REQUIRE(fb.size() == 2);
  CHECK_FALSE(fb[1].success);
  CHECK(fb[1].cause == "EmptyClose");
  CHECK_FALSE(s.held_object);

  // Let the glove open again, then retry.
  s = ex.begin(s, plan({{K::Reach, "orange"}, {K::Grasp, "orange"}}));
  fb = run(ex, s, scene);
  REQUIRE(fb.size() == 2);
  CHECK(fb[1].success);
  CHECK(s.held_object == "orange");
}

TEST_CASE("release placement") {
  const auto scene = dining();
  SUBCASE("orange over the bowl lands inside it") {
    const auto s = holding(scene, "orange", Vec3(0.65, 0.25, 0.95));
    const auto [out, st] = apply_release(s, scene);
    CHECK(out.at("bowl").aabb.contains(out.at("orange").aabb.center));
    CHECK_FALSE(st.held_object);
    CHECK(st.glove.commanded == GloveCommand::Open);
  }
  SUBCASE("cup over the table rests on it") {
    const auto s = holding(scene, "cup", Vec3(0.35, -0.3, 0.95));
    const auto [out, st] = apply_release(s, scene);
    CHECK(out.at("cup").aabb.bottom() == doctest::Approx(scene.table_height).epsilon(1e-12));
    CHECK(out.at("cup").aabb.center.x() == doctest::Approx(0.35 + s.held_offset.x()));
  }
  SUBCASE("empty hand") {
    ExecutorState s;
    CHECK_THROWS_AS(apply_release(s, scene), NothingToRelease);
    CHECK_THROWS_AS(apply_release(s, scene), ProtocolError);
  }
}

TEST_CASE("release symbol opens the glove before letting go") {
  ArmConfig arm;
  const Executor ex(arm, {});
  auto scene = dining();
  auto s = holding(scene, "orange", Vec3(0.65, 0.25, 0.95));
  s.glove.flexion = 0.55;
  s = ex.begin(s, plan({{K::Transport, "bowl"}, {K::Release, ""}}, "bowl"));
  s.active->feed({{K::Transport, "bowl"}, true, ""});
  auto r = ex.step(s, scene, 1.0 / 60);
  CHECK(r.state.held_object == "orange");
  CHECK(r.feedback.empty());
  s = r.state;
  const auto fb = run(ex, s, scene);
  REQUIRE(fb.size() == 1);
  CHECK(fb[0].success);
  CHECK(s.glove.flexion <= ExecutorLimits{}.release_open_threshold);
  CHECK_FALSE(s.held_object);
  CHECK(scene.at("bowl").aabb.contains(scene.at("orange").aabb.center));
}

TEST_CASE("pour transfers contents") {
  const auto scene = dining();
  const auto s = holding(scene, "cup", Vec3(0.65, 0.25, 0.95));

  auto out = apply_pour(s, scene, "cup", "bowl");
  CHECK(*out.at("bowl").contents == doctest::Approx(0.8));
  CHECK(*out.at("cup").contents == 0.0);

  auto empty = scene;
  empty.at("cup").contents = 0.0;
  out = apply_pour(s, empty, "cup", "bowl");
  CHECK(*out.at("bowl").contents == 0.0);

  auto half = scene;
  half.at("bowl").contents = 0.5;
  out = apply_pour(s, half, "cup", "bowl");
  CHECK(*out.at("bowl").contents == 1.0);
  CHECK(*out.at("cup").contents == 0.0);

  CHECK_THROWS_AS(apply_pour(s, scene, "cup", "table"), ProtocolError);
}

TEST_CASE("pour symbol rolls, holds, and returns") {
  ArmConfig arm;
  const Executor ex(arm, {});
  auto scene = dining();
  auto s = holding(scene, "cup", Vec3(0.65, 0.25, 0.95));
  s = ex.begin(s, plan({{K::Transport, "bowl"}, {K::Pour, "bowl"}}, "bowl"));
  s.active->feed({{K::Transport, "bowl"}, true, ""});
  double max_roll = 0, t = 0;
  std::vector<ExecutionFeedback> fb;
  while (!s.active->finished()) {
    auto r = ex.step(s, scene, 1.0 / 60);
    s = r.state;
    scene = r.scene;
    t += 1.0 / 60;
    max_roll = std::max(max_roll, s.wrist.wrist_roll);
    CHECK(s.wrist.wrist == Vec3(0.65, 0.25, 0.95));
    fb.insert(fb.end(), r.feedback.begin(), r.feedback.end());
  }
  REQUIRE(fb.size() == 1);
  CHECK(fb[0].success);
  CHECK(max_roll == 120.0);
  CHECK(s.wrist.wrist_roll == 0.0);
  // 1 s up, 1 s held, 1 s back at 120 deg/s.
  CHECK(t == doctest::Approx(3.0).epsilon(0.02));
  CHECK(*scene.at("bowl").contents == doctest::Approx(0.8));
  CHECK(s.held_object == "cup");
}

TEST_CASE("safety thresholds") {
  const ExecutorLimits lim;
  CHECK(safety_check({true, Vec3(0, 0, 60), Vec3::Zero()}, lim) == SafetyVerdict::Release);
  CHECK(safety_check({true, Vec3(0, 0, 10), Vec3(0, 0, 1)}, lim) == SafetyVerdict::Nominal);
  CHECK(safety_check({true, Vec3::Zero(), Vec3(0, 6, 0)}, lim) == SafetyVerdict::Release);
  CHECK(safety_check({true, Vec3(0, 0, 50), Vec3::Zero()}, lim) == SafetyVerdict::Nominal);
}

TEST_CASE("monitor drops the magnet and inhibits motion") {
  ArmConfig arm;
  FaultConfig faults;
  faults.force_spike = ForceSpike{0.5, Vec3(0, 0, 60), Vec3::Zero()};
  const Executor ex(arm, {}, faults);
  const auto scene = dining();
  auto s = ex.begin(ExecutorState::at_home(arm), plan({{K::Reach, "orange"}, {K::Grasp, "orange"}}));
  CHECK(ex.monitor(s, 0.4, 0.45) == SafetyVerdict::Nominal);
  CHECK(ex.monitor(s, 0.45, 0.5) == SafetyVerdict::Release);
  CHECK_FALSE(s.attachment.magnet_on);
  CHECK(s.active->aborted());
  CHECK_THROWS_AS(ex.step(s, scene, 0.1), MotionInhibited);
  // Latched even after the spike has passed.
  CHECK(ex.monitor(s, 0.5, 0.6) == SafetyVerdict::Release);
}
