#pragma once

// Brute-force reference computations used as expected values in tests.
// None of them call into the library's geometric predicates.

#include <set>
#include <vector>

#include "foldnet/foldsim.hpp"
#include "foldnet/mesh.hpp"
#include "foldnet/net.hpp"
#include "foldnet/planner.hpp"
#include "foldnet/substrate.hpp"

namespace oracle {

using foldnet::Vec2;
using foldnet::Vec3;

// Every spanning tree of the face-dual graph, as sorted edge-id lists.
std::vector<std::vector<int>> spanning_trees(const foldnet::TriMesh& mesh);

// Area of the intersection of two convex polygons (Sutherland-Hodgman).
double intersection_area(const std::vector<Vec2>& a, const std::vector<Vec2>& b);

// Face pairs of a planar net whose interiors share positive area.
std::vector<std::pair<int, int>> net_overlaps(const foldnet::Net& net, double min_area = 1e-6);

// True when an edge of one polygon passes through the interior of the
// other, deeper than `tol` on both sides of its plane.
bool polygons_pierce(const std::vector<Vec3>& a, const std::vector<Vec3>& b, double tol = 1e-6);

// Face pairs of a folded state that pierce each other, skipping pairs
// hinged together by a crease.
std::vector<std::pair<int, int>> state_collisions(const foldnet::Net& net, const foldnet::FoldedState& s);

// RMS distance after the optimal proper rigid alignment of p onto q.
double kabsch_rms(const std::vector<Vec3>& p, const std::vector<Vec3>& q);

// Mesh vertex positions against the folded net, one pair per face corner.
double refold_rms(const foldnet::TriMesh& mesh, const foldnet::Net& net, const foldnet::Configuration& cfg);

// Does the vertical ray up from p hit the polygon at or above p's height
// (within tol below), strictly inside its xy projection?
bool ray_blocked(const std::vector<Vec3>& poly, const Vec3& p, double tol = 1e-6);

// Hinge of crease k sampled at n points; any face other than the two it
// joins blocking any sample makes the crease invisible.
bool hinge_visible(const foldnet::Net& net, const foldnet::FoldedState& s, int k, int n = 64);

// Cells whose square meets the part of any face inside the slab
// -thickness <= z <= -eps with positive area.
std::set<int> slab_cells(const foldnet::FoldedState& s, const foldnet::Substrate& grid, double eps = 1e-9);

// Union of slab_cells over a fold of crease k from cfg.q[k] to `to`,
// sampled every `step_deg` of crease angle.
std::set<int> swept_cells(const foldnet::Net& net, foldnet::Configuration cfg, int k, double to,
                          const foldnet::Substrate& grid, double step_deg = 0.1);

// Highest completion reachable from the flat state by any interleaving of
// primitive moves: advance a crease to 1, re-open it to 0 or to half its
// fraction, turning the workpiece over when needed. A crease's first move
// must come before any ancestor has moved; at most `max_retracts`
// re-openings. Each move stops at the last clear sample.
struct InterleavingResult {
  double best = 0.0;
  long states = 0;
};
InterleavingResult best_interleaving(const foldnet::Net& net, int max_retracts, double step_deg = 1.0,
                                     int max_flips = 8);

}  // namespace oracle
