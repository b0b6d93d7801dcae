#include "gazegrasp/raycast_batch.hpp"

#include <omp.h>

#include <algorithm>

namespace gazegrasp {

std::vector<std::optional<GazeHit>> cast_batch_serial(const CameraModel& camera, const Scene& scene,
                                                      std::span<const Pixel> pixels) {
  std::vector<std::optional<GazeHit>> out(pixels.size());
  for (std::size_t i = 0; i < pixels.size(); ++i) out[i] = intersect_scene(cast_gaze_ray(camera, pixels[i]), scene);
  return out;
}

std::vector<std::optional<GazeHit>> cast_batch(const CameraModel& camera, const Scene& scene,
                                               std::span<const Pixel> pixels) {
  for (const auto& px : pixels)
    if (!camera.in_image(px)) throw DomainError("cast_batch: pixel outside image");
  std::vector<std::optional<GazeHit>> out(pixels.size());
  const auto n = static_cast<std::ptrdiff_t>(pixels.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = intersect_scene(cast_gaze_ray(camera, pixels[i]), scene);
  return out;
}

std::vector<std::optional<GazeHit>> intersect_batch_serial(const Scene& scene, std::span<const Ray> rays) {
  std::vector<std::optional<GazeHit>> out(rays.size());
  for (std::size_t i = 0; i < rays.size(); ++i) out[i] = intersect_scene(rays[i], scene);
  return out;
}

std::vector<std::optional<GazeHit>> intersect_batch(const Scene& scene, std::span<const Ray> rays) {
  std::vector<std::optional<GazeHit>> out(rays.size());
  const auto n = static_cast<std::ptrdiff_t>(rays.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = intersect_scene(rays[i], scene);
  return out;
}

std::vector<Pixel> pixel_grid(const Rect& region, double stride) {
  if (!(stride > 0.0)) throw DomainError("pixel_grid: stride must be positive");
  std::vector<Pixel> out;
  const auto cols = static_cast<int>(region.w / stride);
  const auto rows = static_cast<int>(region.h / stride);
  out.reserve(static_cast<std::size_t>(std::max(cols, 0)) * static_cast<std::size_t>(std::max(rows, 0)));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out.push_back({region.x + (c + 0.5) * stride, region.y + (r + 0.5) * stride});
  return out;
}

}  // namespace gazegrasp
