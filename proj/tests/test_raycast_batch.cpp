#include "gazegrasp/config.hpp"
#include "gazegrasp/raycast_batch.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace gazegrasp;

namespace {

bool same(const std::optional<GazeHit>& a, const std::optional<GazeHit>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->object_id == b->object_id && a->ray_t == b->ray_t && a->point == b->point;
}

}  // namespace

TEST_CASE("pixel grid covers the region at the stride") {
  const auto grid = pixel_grid({10, 20, 6, 4}, 2);
  REQUIRE(grid.size() == 3 * 2);
  CHECK(grid.front() == Pixel{11, 21});
  CHECK(grid[1] == Pixel{13, 21});
  CHECK(grid[3] == Pixel{11, 23});
  for (const auto& p : grid) CHECK(Rect{10, 20, 6, 4}.contains(p.u, p.v));
  CHECK_THROWS_AS(pixel_grid({0, 0, 10, 10}, 0), DomainError);
}

TEST_CASE("parallel pixel casting equals the serial reference") {
  const auto cfg = load_session_config(std::string(GAZEGRASP_DATA_DIR) + "/session.json");
  const auto pixels = pixel_grid({0, 0, 1280, 720}, 7);
  const auto serial = cast_batch_serial(cfg.camera, cfg.scene, pixels);
  const auto parallel = cast_batch(cfg.camera, cfg.scene, pixels);
  REQUIRE(serial.size() == pixels.size());
  REQUIRE(parallel.size() == pixels.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    CHECK(same(serial[i], parallel[i]));
    if (serial[i] && serial[i]->object_id) ++hits;
  }
  CHECK(hits > pixels.size() / 4);
  // One by one through the single-ray path.
  for (std::size_t i = 0; i < pixels.size(); i += 97)
    CHECK(same(serial[i], intersect_scene(cast_gaze_ray(cfg.camera, pixels[i]), cfg.scene)));

  const std::vector<Pixel> bad{{10, 10}, {-3, 10}};
  CHECK_THROWS_AS(cast_batch(cfg.camera, cfg.scene, bad), DomainError);
  CHECK_THROWS_AS(cast_batch_serial(cfg.camera, cfg.scene, bad), DomainError);
}

TEST_CASE("parallel ray batch equals the serial reference") {
  std::mt19937_64 rng(21);
  const auto scene = oracle::random_box_scene(rng, 8);
  std::vector<Ray> rays;
  for (int i = 0; i < 5000; ++i) rays.push_back({1.5 * oracle::random_unit(rng), oracle::random_unit(rng)});
  const auto serial = intersect_batch_serial(scene, rays);
  const auto parallel = intersect_batch(scene, rays);
  REQUIRE(serial.size() == rays.size());
  for (std::size_t i = 0; i < rays.size(); ++i) CHECK(same(serial[i], parallel[i]));
  CHECK(intersect_batch(scene, std::span<const Ray>{}).empty());
}
