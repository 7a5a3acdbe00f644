#include "catlab/spaces/model_surface.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "catlab/error.hpp"

namespace catlab::spaces {

namespace {

double minkowski(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y - a.z * b.z; }

// Geodesic distance between two points of the unit-curvature model.
double unit_distance(double kappa, const ModelPoint& p, const ModelPoint& q) {
  if (kappa > 0.0) {
    return std::atan2(norm(cross(p, q)), dot(p, q));
  }
  const Vec3 d = p - q;
  if (kappa < 0.0) {
    const double chord2 = std::max(0.0, d.x * d.x + d.y * d.y - d.z * d.z);
    return 2.0 * std::asinh(0.5 * std::sqrt(chord2));
  }
  return std::hypot(d.x, d.y);
}

}  // namespace

ModelSurface::ModelSurface(double kappa)
    : kappa_(kappa), scale_(kappa == 0.0 ? 1.0 : std::sqrt(std::abs(kappa))) {
  if (!std::isfinite(kappa)) raise(ErrorCode::InvalidArgument, "curvature must be finite");
}

double ModelSurface::diameter_bound() const noexcept {
  return kappa_ > 0.0 ? std::numbers::pi / scale_ : std::numeric_limits<double>::infinity();
}

double ModelSurface::convexity_radius() const noexcept {
  return kappa_ > 0.0 ? 0.5 * std::numbers::pi / scale_ : std::numeric_limits<double>::infinity();
}

ModelPoint ModelSurface::origin() const noexcept {
  if (kappa_ == 0.0) return {0.0, 0.0, 0.0};
  return {0.0, 0.0, 1.0};
}

ModelPoint ModelSurface::polar(double radius, double angle) const {
  return exp(origin(), radius * std::cos(angle), radius * std::sin(angle));
}

ModelPoint ModelSurface::from_plane(double x, double y) const {
  if (kappa_ != 0.0) raise(ErrorCode::InvalidArgument, "planar coordinates need kappa == 0");
  return {x, y, 0.0};
}

ModelPoint ModelSurface::from_poincare(double x, double y) const {
  if (kappa_ >= 0.0) raise(ErrorCode::InvalidArgument, "Poincare coordinates need kappa < 0");
  const double s = x * x + y * y;
  if (!(s < 1.0)) raise(ErrorCode::OutOfDomain, "Poincare point outside the unit disc");
  const double inv = 1.0 / (1.0 - s);
  return {2.0 * x * inv, 2.0 * y * inv, (1.0 + s) * inv};
}

Vec2 ModelSurface::to_poincare(const ModelPoint& p) const {
  if (kappa_ >= 0.0) raise(ErrorCode::InvalidArgument, "Poincare coordinates need kappa < 0");
  return {p.x / (1.0 + p.z), p.y / (1.0 + p.z)};
}

ModelPoint ModelSurface::from_direction(double x, double y, double z) const {
  if (kappa_ <= 0.0) raise(ErrorCode::InvalidArgument, "sphere coordinates need kappa > 0");
  const Vec3 v{x, y, z};
  const double n = norm(v);
  if (n == 0.0) raise(ErrorCode::InvalidArgument, "zero direction vector");
  return (1.0 / n) * v;
}

double ModelSurface::distance(const ModelPoint& p, const ModelPoint& q) const {
  return unit_distance(kappa_, p, q) / scale_;
}

ModelPoint ModelSurface::geodesic_point(const ModelPoint& p, const ModelPoint& q, double t) const {
  if (kappa_ == 0.0) return {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y), 0.0};
  const double theta = unit_distance(kappa_, p, q);
  if (kappa_ > 0.0 && std::numbers::pi - theta < 1e-10) {
    raise(ErrorCode::AntipodalPair, "geodesic between antipodal points is not unique");
  }
  if (theta == 0.0) return p;
  if (t == 0.0) return p;
  if (t == 1.0) return q;
  double a, b;
  if (kappa_ > 0.0) {
    const double s = std::sin(theta);
    a = std::sin((1.0 - t) * theta) / s;
    b = std::sin(t * theta) / s;
  } else {
    const double s = std::sinh(theta);
    a = std::sinh((1.0 - t) * theta) / s;
    b = std::sinh(t * theta) / s;
  }
  return project(a * p + b * q);
}

std::array<Vec3, 2> ModelSurface::frame(const ModelPoint& base) const {
  if (kappa_ == 0.0) return {Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}};
  if (kappa_ > 0.0) {
    const Vec3 helper = std::abs(base.z) < 0.9 ? Vec3{0.0, 0.0, 1.0} : Vec3{1.0, 0.0, 0.0};
    Vec3 e1 = helper - dot(helper, base) * base;
    e1 = (1.0 / norm(e1)) * e1;
    return {e1, cross(base, e1)};
  }
  auto tangent = [&](const Vec3& w) { return w + minkowski(w, base) * base; };
  Vec3 e1 = tangent({1.0, 0.0, 0.0});
  e1 = (1.0 / std::sqrt(minkowski(e1, e1))) * e1;
  Vec3 e2 = tangent({0.0, 1.0, 0.0});
  e2 = e2 - minkowski(e2, e1) * e1;
  e2 = (1.0 / std::sqrt(minkowski(e2, e2))) * e2;
  return {e1, e2};
}

ModelPoint ModelSurface::exp(const ModelPoint& base, double a, double b) const {
  const auto [e1, e2] = frame(base);
  if (kappa_ == 0.0) return {base.x + a, base.y + b, 0.0};
  const double len = std::hypot(a, b);
  if (len == 0.0) return base;
  const Vec3 dir = (1.0 / len) * (a * e1 + b * e2);
  const double n = len * scale_;
  if (kappa_ > 0.0) return project(std::cos(n) * base + std::sin(n) * dir);
  return project(std::cosh(n) * base + std::sinh(n) * dir);
}

Vec2 ModelSurface::log(const ModelPoint& base, const ModelPoint& q) const {
  const auto [e1, e2] = frame(base);
  if (kappa_ == 0.0) return {q.x - base.x, q.y - base.y};
  Vec3 w;
  double wn;
  double e1w, e2w;
  if (kappa_ > 0.0) {
    w = q - dot(q, base) * base;
    wn = norm(w);
    e1w = dot(w, e1);
    e2w = dot(w, e2);
  } else {
    w = q + minkowski(q, base) * base;
    wn = std::sqrt(std::max(0.0, minkowski(w, w)));
    e1w = minkowski(w, e1);
    e2w = minkowski(w, e2);
  }
  if (wn == 0.0) return {0.0, 0.0};
  const double len = unit_distance(kappa_, base, q) / scale_;
  return {e1w / wn * len, e2w / wn * len};
}

ModelPoint ModelSurface::project(const ModelPoint& p) const {
  if (kappa_ == 0.0) return {p.x, p.y, 0.0};
  if (kappa_ > 0.0) return (1.0 / norm(p)) * p;
  return {p.x, p.y, std::sqrt(1.0 + p.x * p.x + p.y * p.y)};
}

}  // namespace catlab::spaces
