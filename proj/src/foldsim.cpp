#include "foldnet/foldsim.hpp"

#include <algorithm>
#include <cmath>

#include "foldnet/errors.hpp"
#include "foldnet/kernels.hpp"

namespace foldnet {

Rigid flip_motion(const Net& net) {
  const auto& loop = net.faces()[net.root()].loop;
  double cy = 0.0;
  for (const auto& p : loop) cy += p.y();
  cy /= static_cast<double>(loop.size());
  Rigid r;
  r.rot = Mat3(Vec3(1.0, -1.0, -1.0).asDiagonal());
  r.trans = Vec3(0.0, 2.0 * cy, 0.0);
  return r;
}

FoldedState fold_state(const Net& net, const Configuration& config) {
  const int nf = net.face_count();
  FoldedState s;
  s.flipped = config.flipped;
  s.pose.resize(nf);
  s.polygons.resize(nf);
  s.boxes.resize(nf);
  s.pose[net.root()] = config.flipped ? flip_motion(net) : Rigid{};
  for (int f : net.preorder()) {
    const auto& face = net.faces()[f];
    if (face.parent >= 0) {
      int k = face.crease;
      double angle = config.q[k] * net.creases()[k].target;
      s.pose[f] = s.pose[face.parent] * Rigid::about_line(net.hinge_point(k), net.hinge_axis(k), angle);
    }
    auto& poly = s.polygons[f];
    poly.reserve(face.loop.size());
    for (const auto& p : face.loop) {
      poly.push_back(s.pose[f].apply(Vec3(p.x(), p.y(), 0.0)));
      s.boxes[f].extend(poly.back());
    }
  }
  return s;
}

namespace {

std::vector<kernels::Pair> hinge_pairs(const Net& net) {
  std::vector<kernels::Pair> skip;
  for (const auto& c : net.creases())
    skip.emplace_back(std::min(c.parent_face, c.child_face), std::max(c.parent_face, c.child_face));
  std::sort(skip.begin(), skip.end());
  return skip;
}

}  // namespace

std::vector<FacePair> self_collides(const Net& net, const FoldedState& state) {
  std::vector<int> all(net.face_count());
  for (int i = 0; i < net.face_count(); ++i) all[i] = i;
  auto skip = hinge_pairs(net);
  return kernels::penetrating_pairs_omp(state.polygons, state.boxes, all, {}, skip, kContactTol);
}

std::vector<FacePair> self_collides_between(const Net& net, const FoldedState& state, std::span<const int> moving) {
  std::vector<char> in(net.face_count(), 0);
  for (int f : moving) in[f] = 1;
  std::vector<int> rest;
  for (int f = 0; f < net.face_count(); ++f)
    if (!in[f]) rest.push_back(f);
  if (rest.empty() || moving.empty()) return {};
  auto skip = hinge_pairs(net);
  return kernels::penetrating_pairs_omp(state.polygons, state.boxes, moving, rest, skip, kContactTol);
}

std::set<int> substrate_penetrations(const FoldedState& state, const Substrate& substrate) {
  std::set<int> cells;
  for (size_t f = 0; f < state.polygons.size(); ++f) {
    if (state.boxes[f].lo.z() > -kSlabEps) continue;
    auto foot = slab_footprint(state.polygons[f], substrate.thickness, kSlabEps);
    if (foot.empty()) continue;
    for (int id : substrate.cells_touching(foot)) cells.insert(id);
  }
  return cells;
}

bool crease_visible(const Net& net, const FoldedState& state, int k) {
  const auto& c = net.creases()[k];
  const Rigid& parent = state.pose[c.parent_face];
  Vec3 a = parent.apply(Vec3(c.hinge.a.x(), c.hinge.a.y(), 0.0));
  Vec3 b = parent.apply(Vec3(c.hinge.b.x(), c.hinge.b.y(), 0.0));
  Vec3 d = b - a;
  double len = d.norm();
  Vec3 u = d / len;
  double inset = std::min(kVisibilityInset, 0.25 * len);
  Vec3 a2 = a + inset * u, b2 = b - inset * u;
  for (int i = 0; i < kVisibilitySamples; ++i) {
    Vec3 p = a2 + (b2 - a2) * (static_cast<double>(i) / (kVisibilitySamples - 1));
    for (int f = 0; f < net.face_count(); ++f) {
      if (f == c.parent_face || f == c.child_face) continue;
      const auto& box = state.boxes[f];
      if (box.hi.z() < p.z() - kContactTol) continue;
      if (p.x() < box.lo.x() || p.x() > box.hi.x() || p.y() < box.lo.y() || p.y() > box.hi.y()) continue;
      // A face resting on the hinge (a flap folded flat over it) blocks too.
      if (vertical_ray_hit(state.polygons[f], p, -kContactTol)) return false;
    }
  }
  return true;
}

int laser_side(const Net& net, const FoldedState& state, int k) {
  double up = state.pose[net.creases()[k].parent_face].rot(2, 2);
  if (up > 1e-9) return 1;
  if (up < -1e-9) return -1;
  return 0;
}

std::string to_string(Predicate p) {
  switch (p) {
    case Predicate::None: return "none";
    case Predicate::SelfCollision: return "self_collision";
    case Predicate::Occlusion: return "occlusion";
    case Predicate::Substrate: return "substrate";
    case Predicate::Orientation: return "orientation";
  }
  return "unknown";
}

namespace {

// Fractions visited when moving from `from` to `to` at most `step` apart,
// anchored at `from` so a finer step refines a coarser one.
std::vector<double> sample_fractions(double from, double to, double step) {
  std::vector<double> out{from};
  const double span = std::abs(to - from);
  const double dir = to > from ? 1.0 : -1.0;
  for (long j = 1;; ++j) {
    double t = static_cast<double>(j) * step;
    if (t >= span - 1e-12) break;
    out.push_back(from + dir * t);
  }
  if (span > 0.0) out.push_back(to);
  return out;
}

void add_swept_cells(const Net& net, const FoldedState& s0, const FoldedState& s1, const FoldedState& mid,
                     int k, double half_angle, const Substrate& substrate, std::set<int>& cells) {
  const auto& c = net.creases()[k];
  const Rigid& parent = s0.pose[c.parent_face];
  Vec3 o = parent.apply(net.hinge_point(k));
  Vec3 axis = parent.apply_dir(net.hinge_axis(k));
  const double scale = 1.0 / std::cos(half_angle);
  for (int f : net.moving_faces(k)) {
    if (std::min(s0.boxes[f].lo.z(), s1.boxes[f].lo.z()) > -kSlabEps) {
      // The bulge pushes points at most reach * (scale - 1) off the mid pose.
      double reach = 0.0;
      for (const auto& p : mid.polygons[f]) {
        Vec3 foot = o + axis * (p - o).dot(axis);
        reach = std::max(reach, (p - foot).norm());
      }
      if (mid.boxes[f].lo.z() - reach * (scale - 1.0) > -kSlabEps) continue;
    }
    std::vector<Vec3> pts;
    pts.reserve(3 * s0.polygons[f].size());
    for (const auto& p : s0.polygons[f]) pts.push_back(p);
    for (const auto& p : s1.polygons[f]) pts.push_back(p);
    for (const auto& p : mid.polygons[f]) {
      Vec3 foot = o + axis * (p - o).dot(axis);
      pts.push_back(foot + (p - foot) * scale);
    }
    auto foot = slab_footprint(pts, substrate.thickness, kSlabEps);
    if (foot.empty()) continue;
    for (int id : substrate.cells_touching(foot)) cells.insert(id);
  }
}

}  // namespace

SweepResult sweep_fold(const Net& net, const Configuration& from, int k, double to, const Substrate* substrate,
                       const SweepOptions& opts) {
  if (!(opts.step_deg > 0.0)) throw ParameterError("sweep step must be positive");
  if (k < 0 || k >= net.crease_count()) throw ParameterError("crease index out of range");
  to = std::clamp(to, 0.0, 1.0);
  SweepResult res;
  const double start = from.q[k];
  res.last_clear = start;
  const double target = std::abs(net.creases()[k].target);
  const double step_rad = opts.step_deg * M_PI / 180.0;
  const double step_frac = target > 0.0 ? step_rad / target : 1.0;
  const auto fractions = sample_fractions(start, to, step_frac);
  const auto& moving = net.moving_faces(k);

  Configuration cfg = from;
  std::optional<FoldedState> prev;
  std::set<int> static_cells;
  if (substrate && opts.collect_cells) {
    // Faces that do not move keep their footprint for the whole sweep.
    FoldedState s = fold_state(net, cfg);
    std::vector<char> in(net.face_count(), 0);
    for (int f : moving) in[f] = 1;
    for (int f = 0; f < net.face_count(); ++f) {
      if (in[f] || s.boxes[f].lo.z() > -kSlabEps) continue;
      auto foot = slab_footprint(s.polygons[f], substrate->thickness, kSlabEps);
      for (int id : substrate->cells_touching(foot)) static_cells.insert(id);
    }
    res.cells = static_cells;
  }
  for (size_t j = 0; j < fractions.size(); ++j) {
    const double f = fractions[j];
    cfg.q[k] = f;
    FoldedState s = fold_state(net, cfg);
    auto pairs = self_collides_between(net, s, moving);
    Predicate v = Predicate::None;
    if (!pairs.empty()) {
      v = Predicate::SelfCollision;
      res.pairs = std::move(pairs);
    } else if (!crease_visible(net, s, k)) {
      v = Predicate::Occlusion;
    } else if (substrate && opts.strict_substrate && !substrate_penetrations(s, *substrate).empty()) {
      v = Predicate::Substrate;
    }
    if (v != Predicate::None) {
      res.violation = v;
      res.violation_fraction = f;
      return res;
    }
    if (substrate && opts.collect_cells && prev) {
      Configuration mid_cfg = cfg;
      mid_cfg.q[k] = 0.5 * (f + fractions[j - 1]);
      FoldedState mid = fold_state(net, mid_cfg);
      double half = 0.5 * std::abs(f - fractions[j - 1]) * target;
      add_swept_cells(net, *prev, s, mid, k, half, *substrate, res.cells);
    } else if (substrate && opts.collect_cells) {
      for (int id : substrate_penetrations(s, *substrate)) res.cells.insert(id);
    }
    res.last_clear = f;
    prev = std::move(s);
  }
  return res;
}

SweepResult sweep_flip(const Net& net, const Configuration& from, const Substrate* substrate,
                       const SweepOptions& opts) {
  SweepResult res;
  res.last_clear = 0.0;
  Configuration cfg = from;
  cfg.flipped = !cfg.flipped;
  FoldedState s = fold_state(net, cfg);
  auto pairs = self_collides(net, s);
  if (!pairs.empty()) {
    res.violation = Predicate::SelfCollision;
    res.pairs = std::move(pairs);
    return res;
  }
  if (substrate) {
    auto cells = substrate_penetrations(s, *substrate);
    if (opts.strict_substrate && !cells.empty()) {
      res.violation = Predicate::Substrate;
      return res;
    }
    if (opts.collect_cells) res.cells = std::move(cells);
  }
  res.last_clear = 1.0;
  return res;
}

}  // namespace foldnet
