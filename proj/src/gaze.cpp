#include "gazegrasp/gaze.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace gazegrasp {

namespace {
constexpr double kNearPlane = 1e-6;
}

std::optional<Pixel> CameraModel::project(const Vec3& world) const {
  const Vec3 c = orientation.conjugate() * (world - position);
  if (c.z() <= kNearPlane) return std::nullopt;
  return Pixel{cx + fx * c.x() / c.z(), cy + fy * c.y() / c.z()};
}

void CameraModel::validate() const {
  if (std::abs(orientation.norm() - 1.0) > 1e-9) throw ValidationError("camera.orientation: quaternion not normalized");
  if (!(fx > 0.0 && fy > 0.0)) throw ValidationError("camera: fx, fy must be positive");
  if (width <= 0 || height <= 0) throw ValidationError("camera: image size must be positive");
  if (!(cx >= 0.0 && cx < width && cy >= 0.0 && cy < height))
    throw ValidationError("camera: principal point must lie inside the image");
}

void FixationConfig::validate() const {
  if (!(dispersion_threshold > 0.0)) throw ValidationError("fixation.dispersion_threshold must be positive");
  if (!(min_duration > 0.0)) throw ValidationError("fixation.min_duration must be positive");
  if (!(window >= min_duration)) throw ValidationError("fixation.window must cover min_duration");
}

Ray cast_gaze_ray(const CameraModel& camera, const Pixel& px) {
  if (!camera.in_image(px))
    throw DomainError("gaze pixel (" + std::to_string(px.u) + ", " + std::to_string(px.v) + ") outside image");
  const Vec3 dir_cam((px.u - camera.cx) / camera.fx, (px.v - camera.cy) / camera.fy, 1.0);
  return Ray{camera.position, (camera.orientation * dir_cam).normalized()};
}

std::optional<double> intersect_aabb(const Ray& ray, const Aabb& box) {
  const Vec3 lo = box.min();
  const Vec3 hi = box.max();
  double t_near = -std::numeric_limits<double>::infinity();
  double t_far = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    const double o = ray.origin[axis];
    const double d = ray.direction[axis];
    if (d == 0.0) {
      if (o < lo[axis] || o > hi[axis]) return std::nullopt;
      continue;
    }
    double t0 = (lo[axis] - o) / d;
    double t1 = (hi[axis] - o) / d;
    if (t0 > t1) std::swap(t0, t1);
    t_near = std::max(t_near, t0);
    t_far = std::min(t_far, t1);
    if (t_near > t_far) return std::nullopt;
  }
  if (t_far <= 0.0) return std::nullopt;
  return t_near > 0.0 ? t_near : t_far;
}

std::optional<GazeHit> intersect_scene(const Ray& ray, const Scene& scene) {
  std::optional<GazeHit> best;
  for (const auto& obj : scene.objects) {
    const auto t = intersect_aabb(ray, obj.aabb);
    if (!t) continue;
    if (!best || *t < best->ray_t) best = GazeHit{ray.at(*t), obj.id, *t};
  }
  return best;
}

std::optional<Fixation> detect_fixation(std::span<const GazeSample> window, const FixationConfig& cfg) {
  if (window.empty()) return std::nullopt;
  const double thr2 = cfg.dispersion_threshold * cfg.dispersion_threshold;
  std::size_t first = window.size() - 1;
  double max_d2 = 0.0;
  while (first > 0) {
    const auto& cand = window[first - 1].px;
    double cand_max = 0.0;
    bool fits = true;
    for (std::size_t j = first; j < window.size(); ++j) {
      const double du = cand.u - window[j].px.u;
      const double dv = cand.v - window[j].px.v;
      const double d2 = du * du + dv * dv;
      if (d2 > thr2) {
        fits = false;
        break;
      }
      cand_max = std::max(cand_max, d2);
    }
    if (!fits) break;
    max_d2 = std::max(max_d2, cand_max);
    --first;
  }
  const auto members = window.subspan(first);
  const double duration = members.back().t - members.front().t;
  if (duration < cfg.min_duration) return std::nullopt;
  Pixel sum;
  for (const auto& s : members) {
    sum.u += s.px.u;
    sum.v += s.px.v;
  }
  const auto n = static_cast<double>(members.size());
  return Fixation{{sum.u / n, sum.v / n}, members.front().t, duration, std::sqrt(max_d2)};
}

std::optional<Rect> project_bbox(const CameraModel& camera, const SceneObject& object) {
  const Vec3 lo = object.aabb.min();
  const Vec3 hi = object.aabb.max();
  std::array<Vec3, 8> corners;
  for (int i = 0; i < 8; ++i) {
    const Vec3 world((i & 1) ? hi.x() : lo.x(), (i & 2) ? hi.y() : lo.y(), (i & 4) ? hi.z() : lo.z());
    corners[i] = camera.orientation.conjugate() * (world - camera.position);
  }

  double umin = std::numeric_limits<double>::infinity(), vmin = umin;
  double umax = -umin, vmax = -umin;
  bool any = false;
  auto add = [&](const Vec3& c) {
    const double u = camera.cx + camera.fx * c.x() / c.z();
    const double v = camera.cy + camera.fy * c.y() / c.z();
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    vmin = std::min(vmin, v);
    vmax = std::max(vmax, v);
    any = true;
  };
  for (const auto& c : corners)
    if (c.z() >= kNearPlane) add(c);
  if (!any) return std::nullopt;

  // Edges crossing the near plane contribute their crossing point.
  for (int a = 0; a < 8; ++a) {
    for (int bit = 1; bit < 8; bit <<= 1) {
      const int b = a | bit;
      if (b == a) continue;
      const Vec3& p = corners[a];
      const Vec3& q = corners[b];
      if ((p.z() >= kNearPlane) == (q.z() >= kNearPlane)) continue;
      const double s = (kNearPlane - p.z()) / (q.z() - p.z());
      Vec3 x = p + s * (q - p);
      x.z() = kNearPlane;
      add(x);
    }
  }

  const double x0 = std::clamp(umin, 0.0, static_cast<double>(camera.width));
  const double x1 = std::clamp(umax, 0.0, static_cast<double>(camera.width));
  const double y0 = std::clamp(vmin, 0.0, static_cast<double>(camera.height));
  const double y1 = std::clamp(vmax, 0.0, static_cast<double>(camera.height));
  if (x1 <= x0 || y1 <= y0) return std::nullopt;
  return Rect{x0, y0, x1 - x0, y1 - y0};
}

void GazeWindow::push(const GazeSample& sample) {
  if (!(sample.t > last_t_)) throw DomainError("gaze samples must arrive in strictly increasing time");
  last_t_ = sample.t;
  if (!sample.valid) return;
  samples_.push_back(sample);
  const double horizon = sample.t - cfg_.window;
  std::size_t drop = 0;
  while (drop < samples_.size() && samples_[drop].t < horizon) ++drop;
  samples_.erase(samples_.begin(), samples_.begin() + static_cast<std::ptrdiff_t>(drop));
}

std::optional<Fixation> GazeWindow::fixation() const { return detect_fixation(samples_, cfg_); }

}  // namespace gazegrasp
