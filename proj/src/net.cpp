#include "foldnet/net.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "foldnet/errors.hpp"
#include "foldnet/kernels.hpp"

namespace foldnet {

std::vector<int> CutTree::arcs() const {
  std::vector<int> out;
  for (int e : parent_edge)
    if (e >= 0) out.push_back(e);
  std::sort(out.begin(), out.end());
  return out;
}

CutTree CutTree::from_arcs(const TriMesh& mesh, int root, std::span<const int> arcs) {
  const int nf = mesh.face_count();
  if (root < 0 || root >= nf) throw ParameterError("root face out of range");
  if (static_cast<int>(arcs.size()) != nf - 1) throw ConnectivityError("arc count does not match a spanning tree");
  std::vector<std::vector<std::pair<int, int>>> adj(nf);
  for (int e : arcs) {
    if (e < 0 || e >= mesh.edge_count()) throw ConnectivityError("arc is not an interior edge");
    const auto& ed = mesh.edges()[e];
    adj[ed.f0].push_back({ed.f1, e});
    adj[ed.f1].push_back({ed.f0, e});
  }
  CutTree t;
  t.root = root;
  t.parent.assign(nf, -1);
  t.parent_edge.assign(nf, -1);
  std::vector<char> seen(nf, 0);
  seen[root] = 1;
  std::queue<int> q;
  q.push(root);
  int count = 1;
  while (!q.empty()) {
    int f = q.front();
    q.pop();
    for (auto [g, e] : adj[f]) {
      if (seen[g]) continue;
      seen[g] = 1;
      ++count;
      t.parent[g] = f;
      t.parent_edge[g] = e;
      q.push(g);
    }
  }
  if (count != nf) throw ConnectivityError("arcs do not span the face-dual graph");
  return t;
}

int arc_difference(std::span<const int> a, std::span<const int> b) {
  int diff = 0;
  size_t j = 0;
  for (int x : a) {
    while (j < b.size() && b[j] < x) ++j;
    if (j == b.size() || b[j] != x) ++diff;
  }
  return diff;
}

Net::Net(int root, std::vector<NetFace> faces, std::vector<Crease> creases, std::vector<Cut> cuts,
         Provenance provenance)
    : root_(root),
      faces_(std::move(faces)),
      creases_(std::move(creases)),
      cuts_(std::move(cuts)),
      provenance_(std::move(provenance)) {
  std::sort(creases_.begin(), creases_.end(), [](const Crease& a, const Crease& b) { return a.id < b.id; });
  const int nf = face_count(), nc = crease_count();
  std::vector<std::vector<int>> children(nf);
  for (int k = 0; k < nc; ++k) {
    const auto& c = creases_[k];
    faces_[c.child_face].parent = c.parent_face;
    faces_[c.child_face].crease = k;
    children[c.parent_face].push_back(c.child_face);
  }
  preorder_.clear();
  preorder_.push_back(root_);
  faces_[root_].depth = 0;
  for (size_t i = 0; i < preorder_.size(); ++i) {
    int f = preorder_[i];
    std::sort(children[f].begin(), children[f].end());
    for (int g : children[f]) {
      faces_[g].depth = faces_[f].depth + 1;
      preorder_.push_back(g);
    }
  }
  if (static_cast<int>(preorder_.size()) != nf) throw ConnectivityError("net creases do not form a spanning tree");

  parent_crease_.assign(nc, -1);
  child_creases_.assign(nc, {});
  moving_.assign(nc, {});
  axes_.assign(nc, Vec3::UnitX());
  for (int k = 0; k < nc; ++k) {
    auto& c = creases_[k];
    c.depth = faces_[c.child_face].depth;
    parent_crease_[k] = faces_[c.parent_face].crease;
    if (parent_crease_[k] >= 0) child_creases_[parent_crease_[k]].push_back(k);
  }
  // Moving sets are contiguous ranges of a depth-first order.
  std::vector<int> dfs, first(nf), last(nf);
  std::vector<std::pair<int, bool>> stack{{root_, false}};
  while (!stack.empty()) {
    auto [f, done] = stack.back();
    stack.pop_back();
    if (done) {
      last[f] = static_cast<int>(dfs.size());
      continue;
    }
    first[f] = static_cast<int>(dfs.size());
    dfs.push_back(f);
    stack.push_back({f, true});
    for (auto it = children[f].rbegin(); it != children[f].rend(); ++it) stack.push_back({*it, false});
  }
  for (int k = 0; k < nc; ++k) {
    int cf = creases_[k].child_face;
    moving_[k].assign(dfs.begin() + first[cf], dfs.begin() + last[cf]);
    std::sort(moving_[k].begin(), moving_[k].end());
    const auto& c = creases_[k];
    Vec2 d = c.hinge.b - c.hinge.a;
    Vec2 to_child = vertex_mean(std::span<const Vec2>(faces_[c.child_face].loop)) - c.hinge.a;
    Vec3 axis(d.x(), d.y(), 0.0);
    axis.normalize();
    // (axis x r).z > 0 means a positive rotation raises the child.
    if (cross2(d, to_child) < 0.0) axis = -axis;
    axes_[k] = axis;
  }
}

int Net::crease_index(int crease_id) const {
  auto it = std::lower_bound(creases_.begin(), creases_.end(), crease_id,
                             [](const Crease& c, int id) { return c.id < id; });
  return it != creases_.end() && it->id == crease_id ? static_cast<int>(it - creases_.begin()) : -1;
}

bool Net::is_ancestor(int anc, int k) const {
  for (int p = parent_crease_[k]; p >= 0; p = parent_crease_[p])
    if (p == anc) return true;
  return false;
}

Vec3 Net::hinge_point(int k) const {
  const Vec2& a = creases_[k].hinge.a;
  return {a.x(), a.y(), 0.0};
}

double Net::cut_length() const {
  double s = 0.0;
  for (const auto& c : cuts_) s += c.segment.length();
  return s;
}

double Net::area() const {
  double a = 0.0;
  for (const auto& f : faces_) a += std::abs(signed_area(f.loop));
  return a;
}

namespace {

Rigid root_placement(const TriMesh& mesh, int root) {
  auto loop = mesh.face_loop(root);
  const size_t k = loop.size();
  size_t best = 0;
  double best_len = -1.0;
  for (size_t i = 0; i < k; ++i) {
    double len = (loop[(i + 1) % k] - loop[i]).norm();
    if (len > best_len * (1.0 + 1e-12)) {
      best_len = len;
      best = i;
    }
  }
  Vec3 u = (loop[(best + 1) % k] - loop[best]).normalized();
  Vec3 w = mesh.face_normal(root);
  u = (u - u.dot(w) * w).normalized();
  Vec3 v = w.cross(u);
  Mat3 src;
  src.col(0) = u;
  src.col(1) = v;
  src.col(2) = w;
  Mat3 dst;
  dst.col(0) = Vec3::UnitX();
  dst.col(1) = -Vec3::UnitY();
  dst.col(2) = -Vec3::UnitZ();
  Rigid r;
  r.rot = dst * src.transpose();
  r.trans = -(r.rot * mesh.face_centroid(root));
  return r;
}

std::vector<Rigid> placements(const TriMesh& mesh, const CutTree& tree) {
  const int nf = mesh.face_count();
  std::vector<Rigid> place(nf);
  std::vector<int> order{tree.root};
  std::vector<std::vector<int>> children(nf);
  for (int f = 0; f < nf; ++f)
    if (tree.parent[f] >= 0) children[tree.parent[f]].push_back(f);
  place[tree.root] = root_placement(mesh, tree.root);
  for (size_t i = 0; i < order.size(); ++i) {
    int f = order[i];
    for (int g : children[f]) {
      const auto& ed = mesh.edges()[tree.parent_edge[g]];
      const Vec3& p0 = mesh.vertices()[ed.v0];
      Vec3 axis = (mesh.vertices()[ed.v1] - p0).normalized();
      const Vec3 &np = mesh.face_normal(f), &nc = mesh.face_normal(g);
      double psi = std::atan2(nc.cross(np).dot(axis), nc.dot(np));
      place[g] = place[f] * Rigid::about_line(p0, axis, psi);
      order.push_back(g);
    }
  }
  if (static_cast<int>(order.size()) != nf) throw ConnectivityError("cut tree does not span the mesh");
  return place;
}

std::vector<std::vector<Vec2>> flat_loops(const TriMesh& mesh, const std::vector<Rigid>& place) {
  std::vector<std::vector<Vec2>> loops(mesh.face_count());
  for (int f = 0; f < mesh.face_count(); ++f) {
    loops[f].reserve(mesh.faces()[f].size());
    for (int idx : mesh.faces()[f]) {
      Vec3 p = place[f].apply(mesh.vertices()[idx]);
      loops[f].emplace_back(p.x(), p.y());
    }
  }
  return loops;
}

std::vector<FacePair> overlap_kernel(const std::vector<std::vector<Vec2>>& loops, std::vector<kernels::Pair> skip) {
  std::sort(skip.begin(), skip.end());
  return kernels::overlap_pairs_omp(loops, skip, kOverlapEps);
}

}  // namespace

std::vector<FacePair> tree_overlaps(const TriMesh& mesh, const CutTree& tree) {
  auto loops = flat_loops(mesh, placements(mesh, tree));
  std::vector<kernels::Pair> skip;
  for (int f = 0; f < mesh.face_count(); ++f)
    if (tree.parent[f] >= 0) skip.emplace_back(std::min(f, tree.parent[f]), std::max(f, tree.parent[f]));
  return overlap_kernel(loops, std::move(skip));
}

Net layout(const TriMesh& mesh, const CutTree& tree, Provenance provenance) {
  const int nf = mesh.face_count();
  const auto& targets = fold_targets(mesh);
  std::vector<Rigid> place = placements(mesh, tree);
  auto loops = flat_loops(mesh, place);
  std::vector<NetFace> faces(nf);
  for (int f = 0; f < nf; ++f) faces[f].loop = std::move(loops[f]);
  std::vector<char> is_arc(mesh.edge_count(), 0);
  std::vector<Crease> creases;
  for (int g = 0; g < nf; ++g) {
    int e = tree.parent_edge[g];
    if (e < 0) continue;
    is_arc[e] = 1;
    const auto& ed = mesh.edges()[e];
    int f = tree.parent[g];
    Vec3 a = place[f].apply(mesh.vertices()[ed.v0]);
    Vec3 b = place[f].apply(mesh.vertices()[ed.v1]);
    Crease c;
    c.id = e;
    c.parent_face = f;
    c.child_face = g;
    c.hinge = {Vec2(a.x(), a.y()), Vec2(b.x(), b.y())};
    c.target = targets[e].angle;
    c.trivial = targets[e].trivial;
    creases.push_back(c);
  }
  // Every face edge that is not a hinge becomes a cut segment.
  std::map<std::pair<int, int>, int> edge_id;
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const auto& ed = mesh.edges()[e];
    edge_id[{std::min(ed.v0, ed.v1), std::max(ed.v0, ed.v1)}] = e;
  }
  std::vector<Cut> cuts;
  for (int f = 0; f < nf; ++f) {
    const auto& idx = mesh.faces()[f];
    for (size_t i = 0; i < idx.size(); ++i) {
      int a = idx[i], b = idx[(i + 1) % idx.size()];
      auto it = edge_id.find({std::min(a, b), std::max(a, b)});
      if (it != edge_id.end() && is_arc[it->second]) continue;
      cuts.push_back({{faces[f].loop[i], faces[f].loop[(i + 1) % idx.size()]}, f});
    }
  }
  provenance.edit_count = tree.edit_count;
  provenance.heuristic = tree.heuristic;
  Net net(tree.root, std::move(faces), std::move(creases), std::move(cuts), std::move(provenance));
  net.set_overlaps(detect_overlaps(net));
  return net;
}

std::vector<FacePair> detect_overlaps(const Net& net) {
  std::vector<kernels::Loop2> loops;
  loops.reserve(net.faces().size());
  for (const auto& f : net.faces()) loops.push_back(f.loop);
  std::vector<kernels::Pair> skip;
  for (const auto& c : net.creases())
    skip.emplace_back(std::min(c.parent_face, c.child_face), std::max(c.parent_face, c.child_face));
  return overlap_kernel(loops, std::move(skip));
}

}  // namespace foldnet
