#pragma once

// All-pairs geometric kernels. Each comes as a serial reference and an
// OpenMP variant; both return pairs sorted ascending so results compare
// equal element for element.

#include <span>
#include <vector>

#include "foldnet/geometry.hpp"

namespace foldnet::kernels {

using Loop2 = std::vector<Vec2>;
using Loop3 = std::vector<Vec3>;
using Pair = std::pair<int, int>;

// Pairs (i < j) of 2D convex polygons whose interiors overlap. Pairs in
// `skip` (sorted) are excluded.
std::vector<Pair> overlap_pairs_serial(std::span<const Loop2> loops, std::span<const Pair> skip, double eps);
std::vector<Pair> overlap_pairs_omp(std::span<const Loop2> loops, std::span<const Pair> skip, double eps);

// Pairs (i in `group_a`, j in `group_b`) of 3D polygons that penetrate;
// returned as (min, max). Pairs in `skip` (sorted) are excluded. When
// `group_b` is empty, all pairs within `group_a` are tested.
std::vector<Pair> penetrating_pairs_serial(std::span<const Loop3> loops, std::span<const Aabb3> boxes,
                                           std::span<const int> group_a, std::span<const int> group_b,
                                           std::span<const Pair> skip, double tol);
std::vector<Pair> penetrating_pairs_omp(std::span<const Loop3> loops, std::span<const Aabb3> boxes,
                                        std::span<const int> group_a, std::span<const int> group_b,
                                        std::span<const Pair> skip, double tol);

}  // namespace foldnet::kernels
