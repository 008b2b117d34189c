#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "foldnet/geometry.hpp"
#include "foldnet/mesh.hpp"

namespace foldnet {

using FacePair = std::pair<int, int>;

// Rooted spanning tree of the face-dual graph. Tree arcs are creases,
// interior edges not in the tree are cut.
struct CutTree {
  int root = 0;
  std::vector<int> parent;       // face -> parent face, -1 at the root
  std::vector<int> parent_edge;  // face -> hinge edge id, -1 at the root
  int edit_count = 0;            // arcs not in the blooming tree
  bool heuristic = false;
  std::vector<FacePair> residual_overlaps;

  int face_count() const { return static_cast<int>(parent.size()); }
  std::vector<int> arcs() const;  // sorted hinge edge ids

  // Throws ConnectivityError unless `arcs` spans the mesh without cycles.
  static CutTree from_arcs(const TriMesh& mesh, int root, std::span<const int> arcs);
};

int arc_difference(std::span<const int> sorted_a, std::span<const int> sorted_b);

struct Crease {
  int id = -1;  // mesh edge id
  int parent_face = -1;
  int child_face = -1;
  Segment2 hinge;
  double target = 0.0;  // signed radians
  bool trivial = false;
  int depth = 0;  // creases on the path to the root, this one included
};

struct Cut {
  Segment2 segment;
  int face = -1;  // face whose boundary carries this copy of the edge
};

struct NetFace {
  std::vector<Vec2> loop;  // same vertex order as the mesh face
  int parent = -1;
  int crease = -1;  // index into Net::creases() of the hinge to the parent
  int depth = 0;
};

struct Provenance {
  std::string method = "blooming";
  std::uint64_t seed = 0;
  int edit_count = 0;
  bool heuristic = false;
};

// Planar layout of a cut tree. Faces lie in z = 0 with the outward side
// facing the substrate (-z), so a positive crease target lifts the child
// toward the laser at +z. Creases are stored in ascending id order.
class Net {
 public:
  Net() = default;
  Net(int root, std::vector<NetFace> faces, std::vector<Crease> creases, std::vector<Cut> cuts,
      Provenance provenance);

  int root() const { return root_; }
  const std::vector<NetFace>& faces() const { return faces_; }
  const std::vector<Crease>& creases() const { return creases_; }
  const std::vector<Cut>& cuts() const { return cuts_; }
  const Provenance& provenance() const { return provenance_; }
  Provenance& provenance() { return provenance_; }
  const std::vector<FacePair>& overlaps() const { return overlaps_; }
  void set_overlaps(std::vector<FacePair> pairs) { overlaps_ = std::move(pairs); }

  int face_count() const { return static_cast<int>(faces_.size()); }
  int crease_count() const { return static_cast<int>(creases_.size()); }
  int crease_index(int crease_id) const;  // -1 when absent

  // Faces in parent-before-child order (BFS from the root, ascending ids).
  const std::vector<int>& preorder() const { return preorder_; }
  // Faces carried by crease k (the child face and its descendants).
  const std::vector<int>& moving_faces(int k) const { return moving_[k]; }
  // True when crease `anc` lies on the path from crease `k` to the root.
  bool is_ancestor(int anc, int k) const;
  const std::vector<int>& child_creases(int k) const { return child_creases_[k]; }
  // Hinge line through point `hinge_point(k)` with unit axis oriented so
  // that a positive rotation lifts the child toward +z in the net frame.
  Vec3 hinge_point(int k) const;
  const Vec3& hinge_axis(int k) const { return axes_[k]; }
  double hinge_length(int k) const { return creases_[k].hinge.length(); }
  double cut_length() const;
  double area() const;

 private:
  int root_ = 0;
  std::vector<NetFace> faces_;
  std::vector<Crease> creases_;
  std::vector<Cut> cuts_;
  Provenance provenance_;
  std::vector<FacePair> overlaps_;

  std::vector<int> preorder_;
  std::vector<std::vector<int>> moving_;
  std::vector<std::vector<int>> child_creases_;
  std::vector<int> parent_crease_;  // crease -> parent crease, -1 for root children
  std::vector<Vec3> axes_;
};

inline constexpr double kOverlapEps = 1e-7;  // mm

Net layout(const TriMesh& mesh, const CutTree& tree, Provenance provenance = {});
std::vector<FacePair> detect_overlaps(const Net& net);
// Overlapping face pairs of the tree's layout without building the Net.
std::vector<FacePair> tree_overlaps(const TriMesh& mesh, const CutTree& tree);

}  // namespace foldnet
