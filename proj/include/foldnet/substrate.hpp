#pragma once

#include <set>
#include <span>
#include <vector>

#include "foldnet/geometry.hpp"
#include "foldnet/net.hpp"

namespace foldnet {

// Sacrificial slab occupying z in (-thickness, 0) under the net, divided
// into square cells. Cell ids are row-major: id = row * cols + col.
struct Substrate {
  Vec2 origin = Vec2::Zero();
  double cell = 5.0;       // mm
  double thickness = 3.0;  // mm
  int cols = 0;
  int rows = 0;
  std::set<int> clipped;

  int cell_count() const { return cols * rows; }
  std::vector<Vec2> cell_square(int id) const;
  // Cells whose open squares meet the convex region spanned by `pts` (xy).
  std::vector<int> cells_touching(std::span<const Vec2> convex_pts) const;
  // Shifts the grid with a rigid translation of the whole setup.
  void translate(const Vec2& d) { origin += d; }
};

// Grid over the net's bounding box plus one ring of cells.
Substrate make_substrate(const Net& net, double cell = 5.0, double thickness = 3.0);

// xy footprint of conv(points) ∩ {-thickness <= z <= -eps}; empty when the
// hull stays out of the slab.
std::vector<Vec2> slab_footprint(std::span<const Vec3> points, double thickness, double eps);

}  // namespace foldnet
