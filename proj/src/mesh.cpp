#include "foldnet/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>

#include "foldnet/errors.hpp"

namespace foldnet {

namespace {

struct HalfUse {
  int face;
  int from;
  int to;
};

using EdgeKey = std::pair<int, int>;

EdgeKey key_of(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

std::map<EdgeKey, std::vector<HalfUse>> collect_uses(const std::vector<std::vector<int>>& faces) {
  std::map<EdgeKey, std::vector<HalfUse>> uses;
  for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
    const auto& loop = faces[f];
    for (size_t i = 0; i < loop.size(); ++i) {
      int a = loop[i], b = loop[(i + 1) % loop.size()];
      uses[key_of(a, b)].push_back({f, a, b});
    }
  }
  return uses;
}

double signed_volume(const std::vector<Vec3>& v, const std::vector<std::vector<int>>& faces) {
  double vol = 0.0;
  for (const auto& loop : faces)
    for (size_t i = 1; i + 1 < loop.size(); ++i)
      vol += v[loop[0]].dot(v[loop[i]].cross(v[loop[i + 1]]));
  return vol / 6.0;
}

}  // namespace

TriMesh TriMesh::from_polygons(std::vector<Vec3> vertices, std::vector<std::vector<int>> faces) {
  TriMesh m;
  const int nv = static_cast<int>(vertices.size());
  if (faces.empty()) throw GeometryError("mesh has no faces");
  for (size_t f = 0; f < faces.size(); ++f) {
    if (faces[f].size() < 3) throw GeometryError("face " + std::to_string(f) + " has fewer than 3 vertices");
    for (int idx : faces[f])
      if (idx < 0 || idx >= nv) throw GeometryError("face " + std::to_string(f) + " references a missing vertex");
  }

  auto uses = collect_uses(faces);
  for (const auto& [key, list] : uses) {
    if (list.size() > 2)
      throw ManifoldError("edge (" + std::to_string(key.first) + ", " + std::to_string(key.second) + ") bounds " +
                          std::to_string(list.size()) + " faces");
    if (list.size() == 2 && list[0].face == list[1].face)
      throw ManifoldError("face " + std::to_string(list[0].face) + " uses an edge twice");
  }

  // Orientation flood: flip[f] says whether face f must be reversed so that
  // shared edges are traversed in opposite directions.
  const int nf = static_cast<int>(faces.size());
  std::vector<std::vector<std::pair<int, bool>>> links(nf);  // (neighbor, same_direction)
  for (const auto& [key, list] : uses) {
    if (list.size() != 2) continue;
    bool same = list[0].from == list[1].from;
    links[list[0].face].push_back({list[1].face, same});
    links[list[1].face].push_back({list[0].face, same});
  }
  std::vector<int> flip(nf, -1);
  flip[0] = 0;
  std::queue<int> queue;
  queue.push(0);
  while (!queue.empty()) {
    int f = queue.front();
    queue.pop();
    for (auto [g, same] : links[f]) {
      int want = flip[f] ^ (same ? 1 : 0);
      if (flip[g] < 0) {
        flip[g] = want;
        queue.push(g);
      } else if (flip[g] != want) {
        throw OrientationError("mesh is not orientable (conflict at faces " + std::to_string(f) + ", " +
                               std::to_string(g) + ")");
      }
    }
  }
  if (std::any_of(flip.begin(), flip.end(), [](int x) { return x < 0; }))
    throw ConnectivityError("face-dual graph is disconnected");
  for (int f = 0; f < nf; ++f) {
    if (flip[f]) {
      std::reverse(faces[f].begin(), faces[f].end());
      m.reoriented_ = true;
    }
  }
  uses = collect_uses(faces);
  bool closed = std::all_of(uses.begin(), uses.end(), [](const auto& kv) { return kv.second.size() == 2; });
  if (closed && signed_volume(vertices, faces) < 0.0) {
    for (auto& loop : faces) std::reverse(loop.begin(), loop.end());
    m.reoriented_ = true;
  }

  m.vertices_ = std::move(vertices);
  m.faces_ = std::move(faces);

  for (int f = 0; f < nf; ++f) {
    auto loop = m.face_loop(f);
    Vec3 n = newell_normal(loop);
    if (n.norm() < 1e-12) throw GeometryError("face " + std::to_string(f) + " is degenerate");
    n.normalize();
    Vec3 c = vertex_mean(loop);
    for (const auto& p : loop)
      if (std::abs(n.dot(p - c)) > kPlanarityTol)
        throw GeometryError("face " + std::to_string(f) + " is not planar");
    const size_t k = loop.size();
    for (size_t i = 0; i < k; ++i) {
      Vec3 e0 = loop[(i + 1) % k] - loop[i];
      Vec3 e1 = loop[(i + 2) % k] - loop[(i + 1) % k];
      if (e0.cross(e1).dot(n) <= 1e-12 * e0.norm() * e1.norm())
        throw GeometryError("face " + std::to_string(f) + " is not strictly convex");
    }
  }

  // Edge ids in order of first appearance (face order, then loop order).
  std::map<EdgeKey, int> seen;
  for (int f = 0; f < nf; ++f) {
    const auto& loop = m.faces_[f];
    for (size_t i = 0; i < loop.size(); ++i) {
      int a = loop[i], b = loop[(i + 1) % loop.size()];
      EdgeKey key = key_of(a, b);
      if (seen.count(key)) continue;
      const auto& list = uses.at(key);
      if (list.size() == 2) {
        int other = list[0].face == f ? list[1].face : list[0].face;
        seen[key] = static_cast<int>(m.edges_.size());
        m.edges_.push_back({a, b, f, other});
      } else {
        seen[key] = -1;
        m.boundary_.push_back({a, b, f});
      }
    }
  }
  m.adjacency_.assign(nf, {});
  for (int e = 0; e < static_cast<int>(m.edges_.size()); ++e) {
    m.adjacency_[m.edges_[e].f0].push_back({m.edges_[e].f1, e});
    m.adjacency_[m.edges_[e].f1].push_back({m.edges_[e].f0, e});
  }
  m.cache_geometry();
  return m;
}

std::vector<Vec3> TriMesh::face_loop(int f) const {
  std::vector<Vec3> loop;
  loop.reserve(faces_[f].size());
  for (int idx : faces_[f]) loop.push_back(vertices_[idx]);
  return loop;
}

void TriMesh::cache_geometry() {
  const int nf = face_count();
  normals_.resize(nf);
  centroids_.resize(nf);
  areas_.resize(nf);
  for (int f = 0; f < nf; ++f) {
    auto loop = face_loop(f);
    Vec3 n = newell_normal(loop);
    normals_[f] = n.normalized();
    areas_[f] = 0.5 * n.norm();
    centroids_[f] = vertex_mean(loop);
  }
  targets_.clear();
  targets_.reserve(edges_.size());
  for (int e = 0; e < edge_count(); ++e) {
    const auto& ed = edges_[e];
    const Vec3 &n0 = normals_[ed.f0], &n1 = normals_[ed.f1];
    double phi = std::atan2(n0.cross(n1).norm(), n0.dot(n1));
    FoldTarget t{e, 0.0, false};
    if (phi < kDegenerateAngle) {
      t.trivial = true;
    } else {
      // Convex when the neighbor lies behind this face's plane.
      bool convex = (centroids_[ed.f1] - vertices_[ed.v0]).dot(n0) < 0.0;
      t.angle = convex ? phi : -phi;
    }
    targets_.push_back(t);
  }
}

double TriMesh::total_area() const {
  double a = 0.0;
  for (int f = 0; f < face_count(); ++f) a += face_area(f);
  return a;
}

TriMesh parse_obj(std::istream& in) {
  std::vector<Vec3> verts;
  std::vector<std::vector<int>> faces;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw GeometryError("bad vertex on line " + std::to_string(lineno));
      verts.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> loop;
      std::string tok;
      while (ls >> tok) {
        int idx = std::stoi(tok.substr(0, tok.find('/')));
        idx = idx < 0 ? static_cast<int>(verts.size()) + idx : idx - 1;
        loop.push_back(idx);
      }
      faces.push_back(std::move(loop));
    }
  }
  return TriMesh::from_polygons(std::move(verts), std::move(faces));
}

TriMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError("cannot open " + path.string());
  return parse_obj(in);
}

void write_obj(std::ostream& out, const TriMesh& mesh) {
  char buf[128];
  for (const auto& v : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  for (const auto& loop : mesh.faces()) {
    out << 'f';
    for (int idx : loop) out << ' ' << idx + 1;
    out << '\n';
  }
}

void save_obj(const std::filesystem::path& path, const TriMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw GeometryError("cannot write " + path.string());
  write_obj(out, mesh);
}

DualGraph dual_graph(const TriMesh& mesh) {
  DualGraph g;
  g.node_count = mesh.face_count();
  g.arcs.reserve(mesh.edges().size());
  for (int e = 0; e < mesh.edge_count(); ++e) {
    const auto& ed = mesh.edges()[e];
    g.arcs.push_back({e, ed.f0, ed.f1, (mesh.face_centroid(ed.f0) - mesh.face_centroid(ed.f1)).norm()});
  }
  return g;
}

bool dual_connected(const DualGraph& g) {
  if (g.node_count == 0) return true;
  std::vector<std::vector<int>> adj(g.node_count);
  for (const auto& a : g.arcs) {
    adj[a.a].push_back(a.b);
    adj[a.b].push_back(a.a);
  }
  std::vector<char> seen(g.node_count, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int f = stack.back();
    stack.pop_back();
    for (int h : adj[f])
      if (!seen[h]) {
        seen[h] = 1;
        ++count;
        stack.push_back(h);
      }
  }
  return count == g.node_count;
}

const std::vector<FoldTarget>& fold_targets(const TriMesh& mesh) { return mesh.fold_targets(); }

}  // namespace foldnet
