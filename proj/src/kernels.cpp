#include "foldnet/kernels.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace foldnet::kernels {

namespace {

struct Box2 {
  Vec2 lo, hi;
};

std::vector<Box2> boxes_of(std::span<const Loop2> loops) {
  std::vector<Box2> boxes(loops.size());
  for (size_t i = 0; i < loops.size(); ++i) {
    Vec2 lo = loops[i].front(), hi = loops[i].front();
    for (const auto& p : loops[i]) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
    boxes[i] = {lo, hi};
  }
  return boxes;
}

bool boxes_overlap(const Box2& a, const Box2& b, double eps) {
  return std::min(a.hi.x(), b.hi.x()) - std::max(a.lo.x(), b.lo.x()) > eps &&
         std::min(a.hi.y(), b.hi.y()) - std::max(a.lo.y(), b.lo.y()) > eps;
}

bool skipped(std::span<const Pair> skip, Pair p) { return std::binary_search(skip.begin(), skip.end(), p); }

// Sweep and prune along x: `order` sorts boxes by lo.x, row p pairs
// order[p] with the later boxes that start before it ends.
std::vector<int> x_order(const std::vector<Box2>& boxes) {
  std::vector<int> order(boxes.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return boxes[a].lo.x() < boxes[b].lo.x() || (boxes[a].lo.x() == boxes[b].lo.x() && a < b);
  });
  return order;
}

void overlap_row(std::span<const Loop2> loops, const std::vector<Box2>& boxes, const std::vector<int>& order,
                 std::span<const Pair> skip, double eps, int p, std::vector<Pair>& out) {
  const int n = static_cast<int>(order.size());
  const int i = order[p];
  for (int q = p + 1; q < n && boxes[order[q]].lo.x() < boxes[i].hi.x() - eps; ++q) {
    const int j = order[q];
    if (!boxes_overlap(boxes[i], boxes[j], eps)) continue;
    Pair pr{std::min(i, j), std::max(i, j)};
    if (skipped(skip, pr)) continue;
    if (convex_interiors_overlap(loops[i], loops[j], eps)) out.push_back(pr);
  }
}

void penetration_row(std::span<const Loop3> loops, std::span<const Aabb3> boxes, int a,
                     std::span<const int> others, bool upper_only, std::span<const Pair> skip, double tol,
                     std::vector<Pair>& out) {
  for (int b : others) {
    if (b == a || (upper_only && b < a)) continue;
    if (!boxes[a].overlaps(boxes[b], tol)) continue;
    Pair p{std::min(a, b), std::max(a, b)};
    if (skipped(skip, p)) continue;
    if (convex_polygons_penetrate(loops[a], loops[b], tol)) out.push_back(p);
  }
}

void finish(std::vector<Pair>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<Pair> overlap_pairs_serial(std::span<const Loop2> loops, std::span<const Pair> skip, double eps) {
  auto boxes = boxes_of(loops);
  auto order = x_order(boxes);
  std::vector<Pair> out;
  for (int p = 0; p < static_cast<int>(loops.size()); ++p) overlap_row(loops, boxes, order, skip, eps, p, out);
  finish(out);
  return out;
}

std::vector<Pair> overlap_pairs_omp(std::span<const Loop2> loops, std::span<const Pair> skip, double eps) {
  auto boxes = boxes_of(loops);
  auto order = x_order(boxes);
  const int n = static_cast<int>(loops.size());
  std::vector<Pair> out;
#pragma omp parallel
  {
    std::vector<Pair> local;
#pragma omp for schedule(dynamic, 8) nowait
    for (int p = 0; p < n; ++p) overlap_row(loops, boxes, order, skip, eps, p, local);
#pragma omp critical
    out.insert(out.end(), local.begin(), local.end());
  }
  finish(out);
  return out;
}

std::vector<Pair> penetrating_pairs_serial(std::span<const Loop3> loops, std::span<const Aabb3> boxes,
                                           std::span<const int> group_a, std::span<const int> group_b,
                                           std::span<const Pair> skip, double tol) {
  const bool within = group_b.empty();
  std::span<const int> others = within ? group_a : group_b;
  std::vector<Pair> out;
  for (int a : group_a) penetration_row(loops, boxes, a, others, within, skip, tol, out);
  finish(out);
  return out;
}

std::vector<Pair> penetrating_pairs_omp(std::span<const Loop3> loops, std::span<const Aabb3> boxes,
                                        std::span<const int> group_a, std::span<const int> group_b,
                                        std::span<const Pair> skip, double tol) {
  const bool within = group_b.empty();
  std::span<const int> others = within ? group_a : group_b;
  const int n = static_cast<int>(group_a.size());
  std::vector<Pair> out;
#pragma omp parallel
  {
    std::vector<Pair> local;
#pragma omp for schedule(dynamic, 8) nowait
    for (int i = 0; i < n; ++i) penetration_row(loops, boxes, group_a[i], others, within, skip, tol, local);
#pragma omp critical
    out.insert(out.end(), local.begin(), local.end());
  }
  finish(out);
  return out;
}

}  // namespace foldnet::kernels
