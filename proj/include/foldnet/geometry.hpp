#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace foldnet {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Proper rigid motion x -> rot * x + trans.
struct Rigid {
  Mat3 rot = Mat3::Identity();
  Vec3 trans = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rot * p + trans; }
  Vec3 apply_dir(const Vec3& d) const { return rot * d; }
  Rigid operator*(const Rigid& rhs) const { return {rot * rhs.rot, rot * rhs.trans + trans}; }
  Rigid inverse() const {
    Mat3 rt = rot.transpose();
    return {rt, -(rt * trans)};
  }

  // Rotation by `angle` (right-hand rule) about the line through `point`
  // with unit direction `axis`.
  static Rigid about_line(const Vec3& point, const Vec3& axis, double angle);
};

struct Aabb3 {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void extend(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  bool overlaps(const Aabb3& o, double tol) const {
    return (lo.array() <= o.hi.array() + tol).all() && (o.lo.array() <= hi.array() + tol).all();
  }
};

struct Segment2 {
  Vec2 a;
  Vec2 b;
  double length() const { return (b - a).norm(); }
};

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Area-weighted normal of a planar polygon (not normalized; |n| = 2 * area).
Vec3 newell_normal(std::span<const Vec3> loop);
Vec3 vertex_mean(std::span<const Vec3> loop);
Vec2 vertex_mean(std::span<const Vec2> loop);
double signed_area(std::span<const Vec2> loop);

// Separating-axis test on two convex (possibly degenerate) polygons.
// Interiors count as overlapping only when every axis overlaps by more
// than `eps`; touching along an edge or at a vertex is not an overlap.
bool convex_interiors_overlap(std::span<const Vec2> a, std::span<const Vec2> b, double eps);

// True when two planar convex polygons properly interpenetrate: each one
// crosses the other's plane by more than `tol` and their crossing
// intervals along the intersection line overlap by more than `tol`.
// Coplanar stacking and edge/vertex contact do not count.
bool convex_polygons_penetrate(std::span<const Vec3> a, std::span<const Vec3> b, double tol);

// Parameter t > tol at which the ray origin + t*z hits the polygon's
// interior, if any. Polygons seen edge-on from the ray are ignored.
std::optional<double> vertical_ray_hit(std::span<const Vec3> loop, const Vec3& origin, double tol);

// Andrew's monotone chain; counter-clockwise, no repeated end point.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts);

}  // namespace foldnet
