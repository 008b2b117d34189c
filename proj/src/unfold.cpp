#include "foldnet/unfold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <unordered_map>

#include "foldnet/errors.hpp"

namespace foldnet {

int choose_root(const TriMesh& mesh) {
  int best = 0;
  double best_area = mesh.face_area(0);
  for (int f = 1; f < mesh.face_count(); ++f) {
    double a = mesh.face_area(f);
    if (a > best_area * (1.0 + 1e-9)) {
      best = f;
      best_area = a;
    }
  }
  return best;
}

CutTree blooming_tree(const TriMesh& mesh, int root) {
  const int nf = mesh.face_count();
  if (root < 0 || root >= nf) throw ParameterError("root face out of range");
  auto dual = dual_graph(mesh);
  if (!dual_connected(dual)) throw ConnectivityError("face-dual graph is disconnected");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(nf, inf);
  std::vector<int> via(nf, -1);
  std::vector<char> done(nf, 0);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[root] = 0.0;
  pq.push({0.0, root});
  while (!pq.empty()) {
    auto [d, f] = pq.top();
    pq.pop();
    if (done[f]) continue;
    done[f] = 1;
    for (auto [g, e] : mesh.neighbors(f)) {
      if (done[g]) continue;
      double nd = d + dual.arcs[e].weight;
      double tol = 1e-9 * std::max(1.0, nd);
      if (nd < dist[g] - tol || (std::abs(nd - dist[g]) <= tol && e < via[g])) {
        dist[g] = std::min(dist[g], nd);
        via[g] = e;
        pq.push({dist[g], g});
      }
    }
  }
  std::vector<int> arcs;
  for (int f = 0; f < nf; ++f)
    if (f != root) arcs.push_back(via[f]);
  std::sort(arcs.begin(), arcs.end());
  CutTree t = CutTree::from_arcs(mesh, root, arcs);
  t.edit_count = 0;
  return t;
}

std::vector<int> detached_side(const TriMesh& mesh, const CutTree& tree, int edge) {
  const auto& ed = mesh.edges()[edge];
  int child = tree.parent[ed.f0] == ed.f1 && tree.parent_edge[ed.f0] == edge ? ed.f0 : ed.f1;
  std::vector<std::vector<int>> children(mesh.face_count());
  for (int f = 0; f < mesh.face_count(); ++f)
    if (tree.parent[f] >= 0) children[tree.parent[f]].push_back(f);
  std::vector<int> out{child};
  for (size_t i = 0; i < out.size(); ++i)
    for (int g : children[out[i]]) out.push_back(g);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> reconnecting_arcs(const TriMesh& mesh, const CutTree& tree, int edge) {
  auto side = detached_side(mesh, tree, edge);
  std::vector<char> in_side(mesh.face_count(), 0);
  for (int f : side) in_side[f] = 1;
  std::vector<int> out;
  for (int e = 0; e < mesh.edge_count(); ++e) {
    if (e == edge) continue;
    const auto& ed = mesh.edges()[e];
    if (in_side[ed.f0] != in_side[ed.f1]) out.push_back(e);
  }
  return out;
}

std::vector<int> tree_path_arcs(const CutTree& tree, int a, int b) {
  auto depth_of = [&](int f) {
    int d = 0;
    for (int x = f; tree.parent[x] >= 0; x = tree.parent[x]) ++d;
    return d;
  };
  int da = depth_of(a), db = depth_of(b);
  std::vector<int> out;
  while (da > db) {
    out.push_back(tree.parent_edge[a]);
    a = tree.parent[a];
    --da;
  }
  while (db > da) {
    out.push_back(tree.parent_edge[b]);
    b = tree.parent[b];
    --db;
  }
  while (a != b) {
    out.push_back(tree.parent_edge[a]);
    out.push_back(tree.parent_edge[b]);
    a = tree.parent[a];
    b = tree.parent[b];
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<FacePair> overlaps_of(const TriMesh& mesh, const CutTree& tree) {
  return tree_overlaps(mesh, tree);
}

std::vector<int> swap_arc(std::vector<int> arcs, int out, int in) {
  arcs.erase(std::find(arcs.begin(), arcs.end(), out));
  arcs.insert(std::lower_bound(arcs.begin(), arcs.end(), in), in);
  return arcs;
}

struct VecHash {
  size_t operator()(const std::vector<int>& v) const {
    size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ static_cast<size_t>(x)) * 1099511628211ull;
    return h;
  }
};

class ExactSearch {
 public:
  ExactSearch(const TriMesh& mesh, int root, const std::vector<int>& bloom, long limit)
      : mesh_(mesh), root_(root), bloom_(bloom), limit_(limit) {
    in_bloom_.assign(mesh.edge_count(), 0);
    for (int e : bloom) in_bloom_[e] = 1;
  }

  // Depth-limited search over swaps that remove an original arc on the path
  // of the first overlapping pair and insert a non-original arc.
  bool run(const std::vector<int>& arcs, int depth_left, std::vector<int>& found) {
    if (++evaluations_ > limit_) {
      exhausted_ = true;
      return false;
    }
    CutTree tree = CutTree::from_arcs(mesh_, root_, arcs);
    auto ov = overlaps_of(mesh_, tree);
    if (ov.empty()) {
      found = arcs;
      return true;
    }
    if (depth_left == 0) return false;
    auto& seen = visited_[arcs];
    if (seen >= depth_left) return false;
    seen = depth_left;
    for (int e : tree_path_arcs(tree, ov.front().first, ov.front().second)) {
      if (!in_bloom_[e]) continue;
      for (int in : reconnecting_arcs(mesh_, tree, e)) {
        if (in_bloom_[in]) continue;
        if (run(swap_arc(arcs, e, in), depth_left - 1, found)) return true;
        if (exhausted_) return false;
      }
    }
    return false;
  }

  bool exhausted() const { return exhausted_; }

 private:
  const TriMesh& mesh_;
  int root_;
  const std::vector<int>& bloom_;
  long limit_;
  long evaluations_ = 0;
  bool exhausted_ = false;
  std::vector<char> in_bloom_;
  std::unordered_map<std::vector<int>, int, VecHash> visited_;
};

struct BeamEntry {
  std::vector<int> arcs;
  std::vector<FacePair> overlaps;
  int edits = 0;
};

}  // namespace

CutTree nearly_blooming(const TriMesh& mesh, int root, const NearlyBloomingOptions& opts) {
  CutTree bloom = blooming_tree(mesh, root);
  const auto bloom_arcs = bloom.arcs();
  auto bloom_overlaps = overlaps_of(mesh, bloom);
  if (bloom_overlaps.empty()) return bloom;

  ExactSearch exact(mesh, root, bloom_arcs, opts.node_limit);
  for (int k = 1; k <= opts.edit_budget && !exact.exhausted(); ++k) {
    std::vector<int> found;
    if (exact.run(bloom_arcs, k, found)) {
      CutTree t = CutTree::from_arcs(mesh, root, found);
      t.edit_count = arc_difference(found, bloom_arcs);
      return t;
    }
  }

  // Beam search: rank by overlap count, then edits, then arcs.
  auto better = [](const BeamEntry& a, const BeamEntry& b) {
    if (a.overlaps.size() != b.overlaps.size()) return a.overlaps.size() < b.overlaps.size();
    if (a.edits != b.edits) return a.edits < b.edits;
    return a.arcs < b.arcs;
  };
  std::vector<BeamEntry> beam{{bloom_arcs, bloom_overlaps, 0}};
  BeamEntry best = beam.front();
  std::set<std::vector<int>> seen{bloom_arcs};
  const int max_levels = std::max(mesh.face_count(), opts.edit_budget + 1);
  for (int level = 0; level < max_levels && !best.overlaps.empty(); ++level) {
    std::vector<BeamEntry> next;
    for (const auto& entry : beam) {
      CutTree tree = CutTree::from_arcs(mesh, root, entry.arcs);
      if (entry.overlaps.empty()) continue;
      const auto& [a, b] = entry.overlaps.front();
      for (int e : tree_path_arcs(tree, a, b)) {
        for (int in : reconnecting_arcs(mesh, tree, e)) {
          auto arcs = swap_arc(entry.arcs, e, in);
          if (!seen.insert(arcs).second) continue;
          CutTree cand = CutTree::from_arcs(mesh, root, arcs);
          next.push_back({arcs, overlaps_of(mesh, cand), arc_difference(arcs, bloom_arcs)});
        }
      }
    }
    if (next.empty()) break;
    std::sort(next.begin(), next.end(), better);
    if (static_cast<int>(next.size()) > opts.beam_width) next.resize(opts.beam_width);
    beam = std::move(next);
    if (better(beam.front(), best)) best = beam.front();
  }
  CutTree t = CutTree::from_arcs(mesh, root, best.arcs);
  t.edit_count = best.edits;
  t.heuristic = true;
  t.residual_overlaps = best.overlaps;
  return t;
}

}  // namespace foldnet
