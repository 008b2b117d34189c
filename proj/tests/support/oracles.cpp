#include "oracles.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>

namespace oracle {

using namespace foldnet;

std::vector<std::vector<int>> spanning_trees(const TriMesh& mesh) {
  const int nf = mesh.face_count(), ne = mesh.edge_count();
  std::vector<std::vector<int>> out;
  std::vector<int> pick;
  std::function<void(int, std::vector<int>)> rec = [&](int e, std::vector<int> comp) {
    if (static_cast<int>(pick.size()) == nf - 1) {
      out.push_back(pick);
      return;
    }
    if (ne - e < nf - 1 - static_cast<int>(pick.size())) return;
    const auto& edge = mesh.edges()[e];
    int a = comp[edge.f0], b = comp[edge.f1];
    if (a != b) {
      auto joined = comp;
      for (int& c : joined)
        if (c == b) c = a;
      pick.push_back(e);
      rec(e + 1, joined);
      pick.pop_back();
    }
    rec(e + 1, std::move(comp));
  };
  std::vector<int> comp(nf);
  std::iota(comp.begin(), comp.end(), 0);
  if (nf == 1) return {{}};
  rec(0, comp);
  return out;
}

namespace {

double area2(const std::vector<Vec2>& p) {
  double s = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    const Vec2& a = p[i];
    const Vec2& b = p[(i + 1) % p.size()];
    s += a.x() * b.y() - a.y() * b.x();
  }
  return 0.5 * s;
}

std::vector<Vec2> ccw(std::vector<Vec2> p) {
  if (area2(p) < 0.0) std::reverse(p.begin(), p.end());
  return p;
}

double side(const Vec2& a, const Vec2& b, const Vec2& p) {
  return (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
}

// Keeps the part of `poly` where f(point) >= 0, f affine along edges.
template <class P, class F>
std::vector<P> clip(const std::vector<P>& poly, F f) {
  std::vector<P> out;
  for (size_t i = 0; i < poly.size(); ++i) {
    const P& a = poly[i];
    const P& b = poly[(i + 1) % poly.size()];
    double fa = f(a), fb = f(b);
    if (fa >= 0.0) out.push_back(a);
    if ((fa >= 0.0) != (fb >= 0.0)) out.push_back(a + (b - a) * (fa / (fa - fb)));
  }
  return out;
}

}  // namespace

double intersection_area(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
  auto subject = ccw(a);
  auto clipper = ccw(b);
  for (size_t i = 0; i < clipper.size() && !subject.empty(); ++i) {
    Vec2 p = clipper[i], q = clipper[(i + 1) % clipper.size()];
    subject = clip(subject, [&](const Vec2& x) { return side(p, q, x); });
  }
  return subject.size() < 3 ? 0.0 : std::abs(area2(subject));
}

std::vector<std::pair<int, int>> net_overlaps(const Net& net, double min_area) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < net.face_count(); ++i)
    for (int j = i + 1; j < net.face_count(); ++j)
      if (intersection_area(net.faces()[i].loop, net.faces()[j].loop) > min_area) out.push_back({i, j});
  return out;
}

namespace {

Vec3 plane_normal(const std::vector<Vec3>& p) {
  Vec3 n = Vec3::Zero();
  for (size_t i = 0; i < p.size(); ++i) n += p[i].cross(p[(i + 1) % p.size()]);
  return n.normalized();
}

// Strictly inside a planar convex polygon, by more than tol from each edge.
bool inside_planar(const std::vector<Vec3>& poly, const Vec3& n, const Vec3& x, double tol) {
  for (size_t i = 0; i < poly.size(); ++i) {
    const Vec3& a = poly[i];
    const Vec3& b = poly[(i + 1) % poly.size()];
    Vec3 inward = n.cross(b - a).normalized();
    if ((x - a).dot(inward) <= tol) return false;
  }
  return true;
}

bool edge_pierces(const std::vector<Vec3>& a, const std::vector<Vec3>& b, double tol) {
  Vec3 n = plane_normal(b);
  for (size_t i = 0; i < a.size(); ++i) {
    const Vec3& p = a[i];
    const Vec3& q = a[(i + 1) % a.size()];
    double dp = (p - b[0]).dot(n), dq = (q - b[0]).dot(n);
    if (!((dp > tol && dq < -tol) || (dp < -tol && dq > tol))) continue;
    Vec3 x = p + (q - p) * (dp / (dp - dq));
    if (inside_planar(b, n, x, tol)) return true;
  }
  return false;
}

}  // namespace

bool polygons_pierce(const std::vector<Vec3>& a, const std::vector<Vec3>& b, double tol) {
  return edge_pierces(a, b, tol) || edge_pierces(b, a, tol);
}

std::vector<std::pair<int, int>> state_collisions(const Net& net, const FoldedState& s) {
  std::set<std::pair<int, int>> hinged;
  for (const auto& c : net.creases())
    hinged.insert({std::min(c.parent_face, c.child_face), std::max(c.parent_face, c.child_face)});
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < net.face_count(); ++i)
    for (int j = i + 1; j < net.face_count(); ++j)
      if (!hinged.count({i, j}) && polygons_pierce(s.polygons[i], s.polygons[j])) out.push_back({i, j});
  return out;
}

double kabsch_rms(const std::vector<Vec3>& p, const std::vector<Vec3>& q) {
  const double n = static_cast<double>(p.size());
  Vec3 cp = Vec3::Zero(), cq = Vec3::Zero();
  for (size_t i = 0; i < p.size(); ++i) {
    cp += p[i];
    cq += q[i];
  }
  cp /= n;
  cq /= n;
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  for (size_t i = 0; i < p.size(); ++i) h += (p[i] - cp) * (q[i] - cq).transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  Eigen::Matrix3d r = svd.matrixV() * d * svd.matrixU().transpose();
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); ++i) sum += (r * (p[i] - cp) - (q[i] - cq)).squaredNorm();
  return std::sqrt(sum / n);
}

double refold_rms(const TriMesh& mesh, const Net& net, const Configuration& cfg) {
  FoldedState s = fold_state(net, cfg);
  std::vector<Vec3> p, q;
  for (int f = 0; f < mesh.face_count(); ++f) {
    auto loop = mesh.face_loop(f);
    for (size_t i = 0; i < loop.size(); ++i) {
      p.push_back(s.polygons[f][i]);
      q.push_back(loop[i]);
    }
  }
  return kabsch_rms(p, q);
}

bool ray_blocked(const std::vector<Vec3>& poly, const Vec3& p, double tol) {
  Vec3 n = Vec3::Zero();
  for (size_t i = 0; i < poly.size(); ++i) n += poly[i].cross(poly[(i + 1) % poly.size()]);
  if (std::abs(n.z()) < 1e-12 * n.norm()) return false;
  std::vector<Vec2> flat;
  for (const auto& v : poly) flat.push_back(v.head<2>());
  flat = ccw(flat);
  for (size_t i = 0; i < flat.size(); ++i)
    if (side(flat[i], flat[(i + 1) % flat.size()], p.head<2>()) <= 1e-12) return false;
  double z = poly[0].z() - (n.x() * (p.x() - poly[0].x()) + n.y() * (p.y() - poly[0].y())) / n.z();
  return z > p.z() - tol;
}

bool hinge_visible(const Net& net, const FoldedState& s, int k, int n) {
  const auto& c = net.creases()[k];
  const Rigid& pose = s.pose[c.parent_face];
  Vec3 a = pose.apply(Vec3(c.hinge.a.x(), c.hinge.a.y(), 0.0));
  Vec3 b = pose.apply(Vec3(c.hinge.b.x(), c.hinge.b.y(), 0.0));
  for (int i = 0; i < n; ++i) {
    Vec3 p = a + (b - a) * ((i + 0.5) / n);
    for (int f = 0; f < net.face_count(); ++f) {
      if (f == c.parent_face || f == c.child_face) continue;
      if (ray_blocked(s.polygons[f], p)) return false;
    }
  }
  return true;
}

std::set<int> slab_cells(const FoldedState& s, const Substrate& grid, double eps) {
  std::set<int> out;
  for (const auto& poly : s.polygons) {
    auto part = clip(poly, [&](const Vec3& x) { return -eps - x.z(); });
    part = clip(part, [&](const Vec3& x) { return x.z() + grid.thickness; });
    if (part.size() < 3) continue;
    std::vector<Vec2> foot;
    for (const auto& v : part) foot.push_back(v.head<2>());
    if (std::abs(area2(foot)) < 1e-12) continue;
    for (int r = 0; r < grid.rows; ++r)
      for (int c = 0; c < grid.cols; ++c) {
        Vec2 lo = grid.origin + Vec2(c * grid.cell, r * grid.cell);
        std::vector<Vec2> sq = {lo, lo + Vec2(grid.cell, 0), lo + Vec2(grid.cell, grid.cell), lo + Vec2(0, grid.cell)};
        if (intersection_area(sq, foot) > 1e-12) out.insert(r * grid.cols + c);
      }
  }
  return out;
}

std::set<int> swept_cells(const Net& net, Configuration cfg, int k, double to, const Substrate& grid,
                          double step_deg) {
  const double from = cfg.q[k];
  const double span_deg = std::abs(to - from) * std::abs(net.creases()[k].target) * 180.0 / std::numbers::pi;
  const int n = std::max(1, static_cast<int>(std::ceil(span_deg / step_deg - 1e-9)));
  std::set<int> out;
  for (int i = 0; i <= n; ++i) {
    cfg.q[k] = from + (to - from) * i / n;
    auto cells = slab_cells(fold_state(net, cfg), grid);
    out.insert(cells.begin(), cells.end());
  }
  return out;
}

InterleavingResult best_interleaving(const Net& net, int max_retracts, double step_deg, int max_flips) {
  const int nc = net.crease_count();
  const double check = step_deg / 2.0;
  InterleavingResult res;
  std::set<std::vector<long long>> seen;

  struct State {
    Configuration cfg;
    std::vector<char> moved;
    int retracts = 0;
    int flips = 0;
  };

  auto locked = [&](const State& s, int k) {
    if (s.moved[k]) return false;
    for (int j = 0; j < nc; ++j)
      if (s.moved[j] && net.is_ancestor(j, k)) return true;
    return false;
  };

  std::function<void(const State&)> dfs = [&](const State& s) {
    std::vector<long long> key;
    for (double q : s.cfg.q) key.push_back(std::llround(q * 1e9));
    key.push_back(s.cfg.flipped);
    for (char m : s.moved) key.push_back(m);
    key.push_back(s.retracts);
    key.push_back(s.flips);
    if (!seen.insert(key).second) return;
    ++res.states;
    res.best = std::max(res.best, completion(net, s.cfg.q));

    for (int k = 0; k < nc; ++k) {
      const auto& c = net.creases()[k];
      if (c.trivial || locked(s, k)) continue;
      std::vector<double> targets;
      const double q = s.cfg.q[k];
      if (q < 1.0 - 1e-9) targets.push_back(1.0);
      if (s.retracts < max_retracts && q > 1e-9) {
        targets.push_back(0.0);
        targets.push_back(0.5 * q);
      }
      for (double t : targets) {
        State n = s;
        const double delta = (t - q) * c.target;
        const int need = delta > 0.0 ? 1 : -1;
        const int sd = laser_side(net, fold_state(net, n.cfg), k);
        if (sd == 0) continue;
        if (sd != need) {
          if (n.flips >= max_flips) continue;
          if (!sweep_flip(net, n.cfg, nullptr, {check, false, false}).clear()) continue;
          n.cfg.flipped = !n.cfg.flipped;
          ++n.flips;
        }
        auto r = sweep_fold(net, n.cfg, k, t, nullptr, {check, false, false});
        if (std::abs(r.last_clear - q) < 1e-9) continue;
        n.cfg.q[k] = r.last_clear;
        n.moved[k] = 1;
        if (t < q) ++n.retracts;
        dfs(n);
      }
    }
  };
  State start{Configuration::flat(net), std::vector<char>(nc, 0), 0, 0};
  dfs(start);
  return res;
}

}  // namespace oracle
