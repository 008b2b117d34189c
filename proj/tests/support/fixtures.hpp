#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "foldnet/mesh.hpp"
#include "foldnet/net.hpp"

namespace fixture {

using foldnet::Vec2;

std::filesystem::path data_dir();
foldnet::TriMesh corpus(const std::string& name);  // data/<name>.obj

// Axis-aligned rectangle, clockwise seen from +z like laid-out faces.
std::vector<Vec2> rect(double x0, double y0, double x1, double y1);

// Hand-built net: faces hang off earlier faces through hinge segments.
// Face edges that are not hinges become cuts.
class NetBuilder {
 public:
  explicit NetBuilder(std::vector<Vec2> root_loop);
  // Returns the new face id. `id` is the crease id (its rank fixes the
  // crease index); target in degrees.
  int add(int parent, std::vector<Vec2> loop, Vec2 a, Vec2 b, double target_deg, int id);
  foldnet::Net build() const;

 private:
  std::vector<foldnet::NetFace> faces_;
  std::vector<foldnet::Crease> creases_;
};

// Root [0,10]^2 and one child [10,20]x[0,10] hinged at x = 10.
foldnet::Net one_crease(double target_deg);

// Root with two flaps. A (crease 0, +170 deg) on the top edge folds back
// over the root and hides the hinge of B (crease 1, +30 deg) on the bottom
// edge. Folding B first avoids the conflict.
foldnet::Net occlusion();

// Root R, panel P hinged to R at x = 10 (crease 0, +50 deg), flap A hinged
// to P at x = 20 (crease 1, +120 deg) and an independent flap B on R's left
// edge (crease 2, +90 deg). With A closed, P stalls at 30 deg because A's
// tip reaches over P's hinge; A must re-open before P can finish.
foldnet::Net blocking();

// Root R, panel P hinged at y = 10 (crease 0, +90 deg) and a flap G of
// length `len` on P's far edge (crease 1, +90 deg). With G closed, G
// starts hiding P's hinge once P passes atan(10 / len).
foldnet::Net visibility_wall(double len);

// Root with flap F (crease 0, +180 deg) long enough to cover the hinge of
// neighbour N (crease 1, +90 deg) when folded flat onto the root.
foldnet::Net flat_flap();

// Two base halves (interior crease 0) with three walls each.
foldnet::Net open_box();

// Root, standing wall W (crease 2, +90 deg) on the right edge, wide wing V
// (crease 1, +150 deg) on the top edge that sweeps through W, and an idle
// flap on the bottom edge (crease 0).
foldnet::Net wing_through_wall();

// Chain of `n` unit squares along x.
foldnet::Net chain(int n, double target_deg = 90.0);

// Open L-shaped tray: two floor pieces and six 5 mm walls, floor piece 0
// is the largest face. One interior wall edge is reflex (mountain).
foldnet::TriMesh l_tray();

}  // namespace fixture
