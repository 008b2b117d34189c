#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "foldnet/geometry.hpp"

namespace foldnet {

inline constexpr double kPlanarityTol = 1e-6;      // mm
inline constexpr double kDegenerateAngle = 1e-9;   // rad

// An edge shared by two faces. `v0 -> v1` is the direction in which face
// `f0` traverses it; `f1` traverses it `v1 -> v0`.
struct MeshEdge {
  int v0 = -1;
  int v1 = -1;
  int f0 = -1;
  int f1 = -1;
};

struct BoundaryEdge {
  int v0 = -1;
  int v1 = -1;
  int face = -1;
};

// Signed crease target: positive folds toward the laser (valley when the
// outward side faces the substrate), negative is a mountain.
struct FoldTarget {
  int edge = -1;
  double angle = 0.0;  // radians, |angle| < pi
  bool trivial = false;
};

// Goal shape: convex planar polygons, consistently oriented so that
// vertex loops are counter-clockwise seen from outside. Immutable once
// built; construct through from_polygons() or load_obj().
class TriMesh {
 public:
  static TriMesh from_polygons(std::vector<Vec3> vertices, std::vector<std::vector<int>> faces);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& faces() const { return faces_; }
  const std::vector<MeshEdge>& edges() const { return edges_; }  // interior edges
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_; }

  int face_count() const { return static_cast<int>(faces_.size()); }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  bool closed() const { return boundary_.empty(); }
  int euler_characteristic() const {
    return vertex_count() - edge_count() - static_cast<int>(boundary_.size()) + face_count();
  }

  std::vector<Vec3> face_loop(int f) const;
  const Vec3& face_normal(int f) const { return normals_[f]; }  // unit, outward
  const Vec3& face_centroid(int f) const { return centroids_[f]; }
  double face_area(int f) const { return areas_[f]; }
  const std::vector<FoldTarget>& fold_targets() const { return targets_; }  // by edge id
  double total_area() const;
  // Faces adjacent to f through interior edges, paired with the edge id.
  const std::vector<std::pair<int, int>>& neighbors(int f) const { return adjacency_[f]; }
  // True when the mesh orientation had to be repaired during construction.
  bool reoriented() const { return reoriented_; }

 private:
  std::vector<Vec3> vertices_;
  std::vector<std::vector<int>> faces_;
  std::vector<MeshEdge> edges_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<std::vector<std::pair<int, int>>> adjacency_;
  bool reoriented_ = false;
  std::vector<Vec3> normals_;
  std::vector<Vec3> centroids_;
  std::vector<double> areas_;
  std::vector<FoldTarget> targets_;

  void cache_geometry();
};

TriMesh load_obj(const std::filesystem::path& path);
TriMesh parse_obj(std::istream& in);
void write_obj(std::ostream& out, const TriMesh& mesh);
void save_obj(const std::filesystem::path& path, const TriMesh& mesh);

struct DualArc {
  int edge = -1;
  int a = -1;
  int b = -1;
  double weight = 0.0;  // centroid distance, mm
};

struct DualGraph {
  int node_count = 0;
  std::vector<DualArc> arcs;  // indexed by interior edge id
};

DualGraph dual_graph(const TriMesh& mesh);
bool dual_connected(const DualGraph& g);

const std::vector<FoldTarget>& fold_targets(const TriMesh& mesh);

}  // namespace foldnet
