#pragma once

#include "gazegrasp/geometry.hpp"
#include "gazegrasp/scene.hpp"

#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gazegrasp {

// Pinhole camera on the simulated head. Camera frame: +Z forward (optical axis),
// +X right, +Y down. `orientation` rotates camera-frame vectors into the world frame.
struct CameraModel {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();
  double fx = 600.0;
  double fy = 600.0;
  double cx = 640.0;
  double cy = 360.0;
  int width = 1280;
  int height = 720;

  bool in_image(const Pixel& px) const {
    return px.u >= 0.0 && px.u < width && px.v >= 0.0 && px.v < height;
  }

  // World point to pixel; nullopt when the point is not in front of the camera.
  std::optional<Pixel> project(const Vec3& world) const;

  void validate() const;  // throws ValidationError
};

struct GazeSample {
  double t = 0.0;
  Pixel px;
  bool valid = true;
};

struct FixationConfig {
  double dispersion_threshold = 25.0;  // px
  double min_duration = 0.2;           // s
  double window = 1.0;                 // s of samples retained

  void validate() const;
};

struct Fixation {
  Pixel centroid;
  double start_t = 0.0;
  double duration = 0.0;
  double dispersion = 0.0;  // max pairwise distance, px
};

struct GazeHit {
  Vec3 point = Vec3::Zero();
  std::optional<std::string> object_id;
  double ray_t = 0.0;
};

Ray cast_gaze_ray(const CameraModel& camera, const Pixel& px);

// Slab test; entry distance of the ray into the box, or the exit distance when the
// origin is inside. nullopt on a miss or when the box lies entirely behind the origin.
std::optional<double> intersect_aabb(const Ray& ray, const Aabb& box);

std::optional<GazeHit> intersect_scene(const Ray& ray, const Scene& scene);

// Longest time-ordered suffix of `window` whose max pairwise distance stays within the
// dispersion threshold; returned only if it spans at least the minimum duration.
std::optional<Fixation> detect_fixation(std::span<const GazeSample> window, const FixationConfig& cfg = {});

std::optional<Rect> project_bbox(const CameraModel& camera, const SceneObject& object);

// Sliding window of valid samples owned by the tick loop.
class GazeWindow {
 public:
  explicit GazeWindow(FixationConfig cfg = {}) : cfg_(cfg) {}

  // Samples must arrive in strictly increasing time; invalid samples are dropped.
  void push(const GazeSample& sample);
  void clear() { samples_.clear(); }

  std::optional<Fixation> fixation() const;
  const FixationConfig& config() const { return cfg_; }
  std::size_t size() const { return samples_.size(); }

 private:
  FixationConfig cfg_;
  std::vector<GazeSample> samples_;
  double last_t_ = -std::numeric_limits<double>::infinity();
};

}  // namespace gazegrasp
