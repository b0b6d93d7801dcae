#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <stdexcept>
#include <string>

namespace gazegrasp {

// World frame: right-handed, Z up, meters.
using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input document (JSON, trace line, wire message).
struct ParseError : Error {
  using Error::Error;
};

// Well-formed input that breaks an invariant.
struct ValidationError : Error {
  using Error::Error;
};

// Argument outside an operation's domain.
struct DomainError : Error {
  using Error::Error;
};

// Caller broke an inter-module protocol (feedback for an action never issued, ...).
struct ProtocolError : Error {
  using Error::Error;
};

struct Aabb {
  Vec3 center = Vec3::Zero();
  Vec3 half_extents = Vec3::Constant(0.5);

  Vec3 min() const { return center - half_extents; }
  Vec3 max() const { return center + half_extents; }
  double top() const { return center.z() + half_extents.z(); }
  double bottom() const { return center.z() - half_extents.z(); }

  bool contains(const Vec3& p, double tol = 0.0) const {
    return ((p - center).cwiseAbs() - half_extents).maxCoeff() <= tol;
  }

  // Euclidean distance from p to the box; zero inside.
  double distance(const Vec3& p) const {
    const Vec3 d = ((p - center).cwiseAbs() - half_extents).cwiseMax(0.0);
    return d.norm();
  }
};

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ();

  Vec3 at(double t) const { return origin + t * direction; }
};

// Pixel rectangle; origin top-left, +u right, +v down.
struct Rect {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  bool contains(double u, double v) const { return u >= x && u <= right() && v >= y && v <= bottom(); }
  bool operator==(const Rect&) const = default;
};

struct Pixel {
  double u = 0.0;
  double v = 0.0;
  bool operator==(const Pixel&) const = default;
};

}  // namespace gazegrasp
