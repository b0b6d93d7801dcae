#include "gazegrasp/intent.hpp"

#include <doctest.h>

using namespace gazegrasp;

namespace {

Fixation fix(double u, double v, double duration, double start = 0.0) { return {{u, v}, start, duration, 3.0}; }

GazeHit hit_on(const std::string& id, double t = 1.0) { return {Vec3::Zero(), id, t}; }

}  // namespace

TEST_CASE("intent zone is the right part of the box") {
  const IntentConfig third;
  const auto thirds = intent_zone({0, 0, 300, 150}, third);
  CHECK(thirds.x == doctest::Approx(200).epsilon(1e-12));
  CHECK(thirds.y == 0);
  CHECK(thirds.w == doctest::Approx(100).epsilon(1e-12));
  CHECK(thirds.h == 150);
  CHECK(thirds.right() == doctest::Approx(300).epsilon(1e-12));
  const auto z = intent_zone({0, 0, 99, 10}, third);
  CHECK(z.x == doctest::Approx(66));
  CHECK(z.w == doctest::Approx(33));
  CHECK(z.h == 10);
  IntentConfig whole;
  whole.zone_fraction = 1.0;
  CHECK(intent_zone({5, 6, 70, 80}, whole) == Rect{5, 6, 70, 80});
  CHECK_THROWS_AS(intent_zone({0, 0, 0, 10}, third), DomainError);
  CHECK_THROWS_AS(intent_zone({0, 0, 10, 0}, third), DomainError);
}

TEST_CASE("intent config validation") {
  IntentConfig c;
  CHECK_NOTHROW(c.validate());
  c.zone_fraction = 0.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = {};
  c.dwell_duration = -1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("decode_intent rule") {
  const IntentConfig cfg;
  const std::vector<ProjectedObject> orange{{"orange", {300, 200, 90, 60}}};

  SUBCASE("dwelling in the right third on the orange") {
    const auto ev = decode_intent(fix(375, 230, 0.6, 2.0), orange, hit_on("orange"), cfg);
    REQUIRE(ev);
    CHECK(ev->object_id == "orange");
    CHECK(ev->t == doctest::Approx(2.6));
  }
  SUBCASE("left half") { CHECK_FALSE(decode_intent(fix(320, 230, 0.6), orange, hit_on("orange"), cfg)); }
  SUBCASE("below dwell") { CHECK_FALSE(decode_intent(fix(375, 230, 0.3), orange, hit_on("orange"), cfg)); }
  SUBCASE("3D hit on another object") {
    CHECK_FALSE(decode_intent(fix(375, 230, 0.6), orange, hit_on("table"), cfg));
    CHECK_FALSE(decode_intent(fix(375, 230, 0.6), orange, std::nullopt, cfg));
    CHECK_FALSE(decode_intent(fix(375, 230, 0.6), orange, GazeHit{}, cfg));
  }
  SUBCASE("overlapping zones resolve to the hit object") {
    const std::vector<ProjectedObject> both{{"cup", {300, 200, 90, 60}}, {"bowl", {290, 190, 110, 80}}};
    const auto ev = decode_intent(fix(375, 230, 0.6), both, hit_on("bowl"), cfg);
    REQUIRE(ev);
    CHECK(ev->object_id == "bowl");
  }
}

TEST_CASE("decoder latch fires once per fixation") {
  IntentDecoder dec;
  const std::vector<ProjectedObject> orange{{"orange", {300, 200, 90, 60}}};
  int fired = 0;
  for (int i = 0; i <= 60; ++i) {
    const double d = 0.2 + i / 60.0;
    if (dec.update(fix(375, 230, d), orange, hit_on("orange"))) ++fired;
  }
  CHECK(fired == 1);
  CHECK(dec.latched() == "orange");

  // Fixation ends: re-armed.
  CHECK_FALSE(dec.update(std::nullopt, orange, std::nullopt));
  CHECK_FALSE(dec.latched());
  CHECK(dec.update(fix(376, 231, 0.5, 5.0), orange, hit_on("orange")));

  // Centroid drifts out of the zone and back within the same fixation.
  CHECK_FALSE(dec.update(fix(330, 231, 0.7, 5.0), orange, hit_on("orange")));
  CHECK(dec.update(fix(377, 231, 0.8, 5.0), orange, hit_on("orange")));
  dec.reset();
  CHECK(dec.update(fix(377, 231, 0.9, 5.0), orange, hit_on("orange")));
}
