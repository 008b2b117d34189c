#include "foldnet/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace foldnet {

Rigid Rigid::about_line(const Vec3& point, const Vec3& axis, double angle) {
  Rigid r;
  r.rot = Eigen::AngleAxisd(angle, axis).toRotationMatrix();
  r.trans = point - r.rot * point;
  return r;
}

Vec3 newell_normal(std::span<const Vec3> loop) {
  Vec3 n = Vec3::Zero();
  const size_t k = loop.size();
  for (size_t i = 0; i < k; ++i) {
    const Vec3& p = loop[i];
    const Vec3& q = loop[(i + 1) % k];
    n.x() += (p.y() - q.y()) * (p.z() + q.z());
    n.y() += (p.z() - q.z()) * (p.x() + q.x());
    n.z() += (p.x() - q.x()) * (p.y() + q.y());
  }
  return n;
}

Vec3 vertex_mean(std::span<const Vec3> loop) {
  Vec3 c = Vec3::Zero();
  for (const auto& p : loop) c += p;
  return c / static_cast<double>(loop.size());
}

Vec2 vertex_mean(std::span<const Vec2> loop) {
  Vec2 c = Vec2::Zero();
  for (const auto& p : loop) c += p;
  return c / static_cast<double>(loop.size());
}

double signed_area(std::span<const Vec2> loop) {
  double a = 0.0;
  for (size_t i = 0; i < loop.size(); ++i) a += cross2(loop[i], loop[(i + 1) % loop.size()]);
  return 0.5 * a;
}

namespace {

void project(std::span<const Vec2> poly, const Vec2& axis, double& lo, double& hi) {
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (const auto& p : poly) {
    double t = axis.dot(p);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
}

}  // namespace

namespace {

bool separated_along(std::span<const Vec2> a, std::span<const Vec2> b, const Vec2& axis, double eps) {
  double alo, ahi, blo, bhi;
  project(a, axis, alo, ahi);
  project(b, axis, blo, bhi);
  return std::min(ahi, bhi) - std::max(alo, blo) <= eps;
}

bool edges_fail_to_separate(std::span<const Vec2> poly, std::span<const Vec2> a, std::span<const Vec2> b, double eps,
                            int& axes) {
  const size_t k = poly.size();
  for (size_t i = 0; i < k; ++i) {
    Vec2 e = poly[(i + 1) % k] - poly[i];
    double len = e.norm();
    if (len < 1e-12) continue;
    ++axes;
    if (separated_along(a, b, Vec2(-e.y() / len, e.x() / len), eps)) return false;
  }
  return true;
}

}  // namespace

bool convex_interiors_overlap(std::span<const Vec2> a, std::span<const Vec2> b, double eps) {
  int axes = 0;
  if (!edges_fail_to_separate(a, a, b, eps, axes)) return false;
  if (!edges_fail_to_separate(b, a, b, eps, axes)) return false;
  if (axes == 0)
    return !separated_along(a, b, Vec2(1.0, 0.0), eps) && !separated_along(a, b, Vec2(0.0, 1.0), eps);
  return true;
}

namespace {

// Interval of `poly` along `dir` where it meets the plane (n, d0):
// n.x = d0. Returns false when the polygon does not strictly cross.
bool crossing_interval(std::span<const Vec3> poly, const Vec3& n, double d0, const Vec3& dir,
                       double tol, double& lo, double& hi) {
  const size_t k = poly.size();
  std::vector<double> dist(k);
  double dmin = std::numeric_limits<double>::infinity(), dmax = -dmin;
  for (size_t i = 0; i < k; ++i) {
    dist[i] = n.dot(poly[i]) - d0;
    dmin = std::min(dmin, dist[i]);
    dmax = std::max(dmax, dist[i]);
  }
  if (dmax <= tol || dmin >= -tol) return false;
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (size_t i = 0; i < k; ++i) {
    size_t j = (i + 1) % k;
    if (std::abs(dist[i]) <= tol) {
      double t = dir.dot(poly[i]);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    if ((dist[i] > tol && dist[j] < -tol) || (dist[i] < -tol && dist[j] > tol)) {
      double s = dist[i] / (dist[i] - dist[j]);
      double t = dir.dot(poly[i] + s * (poly[j] - poly[i]));
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  return lo <= hi;
}

}  // namespace

bool convex_polygons_penetrate(std::span<const Vec3> a, std::span<const Vec3> b, double tol) {
  Vec3 na = newell_normal(a), nb = newell_normal(b);
  double la = na.norm(), lb = nb.norm();
  if (la < 1e-15 || lb < 1e-15) return false;
  na /= la;
  nb /= lb;
  Vec3 dir = na.cross(nb);
  double s = dir.norm();
  if (s < 1e-12) return false;  // parallel planes: stacking or apart
  dir /= s;
  double alo, ahi, blo, bhi;
  if (!crossing_interval(a, nb, nb.dot(b[0]), dir, tol, alo, ahi)) return false;
  if (!crossing_interval(b, na, na.dot(a[0]), dir, tol, blo, bhi)) return false;
  return std::min(ahi, bhi) - std::max(alo, blo) > tol;
}

std::optional<double> vertical_ray_hit(std::span<const Vec3> loop, const Vec3& origin, double tol) {
  Vec3 n = newell_normal(loop);
  double len = n.norm();
  if (len < 1e-15) return std::nullopt;
  n /= len;
  if (std::abs(n.z()) < 1e-9) return std::nullopt;
  double t = n.dot(loop[0] - origin) / n.z();
  if (!(t > tol)) return std::nullopt;
  // Strict containment of the ray's xy in the projected polygon.
  const Vec2 p(origin.x(), origin.y());
  const size_t k = loop.size();
  int sign = 0;
  for (size_t i = 0; i < k; ++i) {
    Vec2 a(loop[i].x(), loop[i].y());
    Vec2 b(loop[(i + 1) % k].x(), loop[(i + 1) % k].y());
    Vec2 e = b - a;
    double el = e.norm();
    if (el < 1e-12) continue;
    double c = cross2(e, p - a) / el;
    if (std::abs(c) <= 1e-9) return std::nullopt;
    int sc = c > 0 ? 1 : -1;
    if (sign == 0) sign = sc;
    else if (sc != sign) return std::nullopt;
  }
  return t;
}

std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Vec2> hull(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross2(hull[k - 1] - hull[k - 2], pts[i - 1] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace foldnet
