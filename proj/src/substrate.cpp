#include "foldnet/substrate.hpp"

#include <algorithm>
#include <cmath>

#include "foldnet/errors.hpp"

namespace foldnet {

std::vector<Vec2> Substrate::cell_square(int id) const {
  int r = id / cols, c = id % cols;
  Vec2 lo = origin + Vec2(c * cell, r * cell);
  return {lo, lo + Vec2(cell, 0.0), lo + Vec2(cell, cell), lo + Vec2(0.0, cell)};
}

std::vector<int> Substrate::cells_touching(std::span<const Vec2> pts) const {
  std::vector<int> out;
  if (pts.empty() || cols == 0 || rows == 0) return out;
  Vec2 lo = pts.front(), hi = pts.front();
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  int c0 = std::max(0, static_cast<int>(std::floor((lo.x() - origin.x()) / cell)));
  int c1 = std::min(cols - 1, static_cast<int>(std::floor((hi.x() - origin.x()) / cell)));
  int r0 = std::max(0, static_cast<int>(std::floor((lo.y() - origin.y()) / cell)));
  int r1 = std::min(rows - 1, static_cast<int>(std::floor((hi.y() - origin.y()) / cell)));
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) {
      int id = r * cols + c;
      auto sq = cell_square(id);
      if (convex_interiors_overlap(sq, pts, 1e-9)) out.push_back(id);
    }
  return out;
}

Substrate make_substrate(const Net& net, double cell, double thickness) {
  if (!(cell > 0.0)) throw ParameterError("substrate cell size must be positive");
  if (!(thickness > 0.0)) throw ParameterError("substrate thickness must be positive");
  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  for (const auto& f : net.faces())
    for (const auto& p : f.loop) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  Substrate s;
  s.cell = cell;
  s.thickness = thickness;
  s.origin = lo - Vec2(cell, cell);
  // Guard against the extent landing a hair above a whole number of cells.
  auto span = [&](double w) { return static_cast<int>(std::ceil(w / cell - 1e-9)) + 2; };
  s.cols = span(hi.x() - lo.x());
  s.rows = span(hi.y() - lo.y());
  return s;
}

std::vector<Vec2> slab_footprint(std::span<const Vec3> points, double thickness, double eps) {
  const double top = -eps, bottom = -thickness;
  std::vector<Vec2> pts;
  for (const auto& p : points)
    if (p.z() <= top && p.z() >= bottom) pts.emplace_back(p.x(), p.y());
  const size_t n = points.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const Vec3& a = points[i];
      const Vec3& b = points[j];
      for (double plane : {top, bottom}) {
        double da = a.z() - plane, db = b.z() - plane;
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
          Vec3 x = a + (b - a) * (da / (da - db));
          pts.emplace_back(x.x(), x.y());
        }
      }
    }
  if (pts.empty()) return pts;
  return convex_hull(std::move(pts));
}

}  // namespace foldnet
