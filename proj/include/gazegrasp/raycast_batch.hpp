#pragma once

#include "gazegrasp/gaze.hpp"

#include <optional>
#include <span>
#include <vector>

namespace gazegrasp {

// Batch ray casting over many gaze pixels. `cast_batch_serial` is the reference;
// `cast_batch` splits the pixels across OpenMP threads and must agree with it exactly.
std::vector<std::optional<GazeHit>> cast_batch_serial(const CameraModel& camera, const Scene& scene,
                                                      std::span<const Pixel> pixels);
std::vector<std::optional<GazeHit>> cast_batch(const CameraModel& camera, const Scene& scene,
                                               std::span<const Pixel> pixels);

// Same pair over explicit rays.
std::vector<std::optional<GazeHit>> intersect_batch_serial(const Scene& scene, std::span<const Ray> rays);
std::vector<std::optional<GazeHit>> intersect_batch(const Scene& scene, std::span<const Ray> rays);

// Row-major pixel grid (pixel centers at stride offsets) covering `region`.
std::vector<Pixel> pixel_grid(const Rect& region, double stride);

}  // namespace gazegrasp
