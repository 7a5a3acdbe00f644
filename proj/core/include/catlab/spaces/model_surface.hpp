#pragma once

#include <array>

#include "catlab/vec.hpp"

namespace catlab::spaces {

/// Point on a model surface, stored in ambient coordinates:
/// kappa == 0: (x, y, 0) in the plane;
/// kappa  > 0: unit vector in R^3 (the sphere is rescaled to radius 1/sqrt(kappa));
/// kappa  < 0: point (x, y, z) on the upper sheet of z^2 - x^2 - y^2 = 1.
using ModelPoint = Vec3;

/// The simply connected surface of constant curvature kappa.
///
/// Curved cases work on the unit sphere / unit hyperboloid and rescale lengths
/// by 1/sqrt(|kappa|). Distances on the hyperboloid use the Minkowski chord,
/// 2 asinh(|p - q|_L / 2), which stays accurate for nearby points where acosh
/// of the inner product would lose half the digits.
class ModelSurface {
 public:
  explicit ModelSurface(double kappa);

  double kappa() const noexcept { return kappa_; }
  /// pi / sqrt(kappa) for kappa > 0, +inf otherwise.
  double diameter_bound() const noexcept;
  /// Largest radius of balls with unique geodesics and convex distance:
  /// pi / (2 sqrt(kappa)) for kappa > 0, +inf otherwise.
  double convexity_radius() const noexcept;

  ModelPoint origin() const noexcept;

  /// Point at distance `radius` from the origin in direction `angle`.
  ModelPoint polar(double radius, double angle) const;
  /// Planar coordinates. Only valid for kappa == 0.
  ModelPoint from_plane(double x, double y) const;
  /// Poincare disc coordinates (|z| < 1). Only valid for kappa < 0; the disc
  /// carries the metric 2|dz| / (sqrt(-kappa) (1 - |z|^2)).
  ModelPoint from_poincare(double x, double y) const;
  Vec2 to_poincare(const ModelPoint& p) const;
  /// Any nonzero vector; normalized onto the sphere. Only valid for kappa > 0.
  ModelPoint from_direction(double x, double y, double z) const;

  double distance(const ModelPoint& p, const ModelPoint& q) const;

  /// Point at parameter t in [0, 1] on the constant-speed geodesic from p to q.
  /// Throws AntipodalPair on the sphere when the geodesic is not unique.
  ModelPoint geodesic_point(const ModelPoint& p, const ModelPoint& q, double t) const;

  /// Exponential map at `base` in a fixed orthonormal tangent frame.
  /// |(a, b)| is the geodesic length of the resulting segment.
  ModelPoint exp(const ModelPoint& base, double a, double b) const;
  /// Inverse of exp within the injectivity radius.
  Vec2 log(const ModelPoint& base, const ModelPoint& q) const;

  /// Reprojects p onto the surface (removes accumulated rounding drift).
  ModelPoint project(const ModelPoint& p) const;

 private:
  std::array<Vec3, 2> frame(const ModelPoint& base) const;

  double kappa_;
  double scale_;  // sqrt(|kappa|), or 1 in the flat case
};

}  // namespace catlab::spaces
