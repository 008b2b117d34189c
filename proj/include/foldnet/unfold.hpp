#pragma once

#include <cstdint>
#include <vector>

#include "foldnet/mesh.hpp"
#include "foldnet/net.hpp"

namespace foldnet {

// Largest face, lowest id on ties.
int choose_root(const TriMesh& mesh);

// Shortest-path tree of the dual graph under centroid distances; equal
// distances prefer the hinge with the lower edge id.
CutTree blooming_tree(const TriMesh& mesh, int root);

struct NearlyBloomingOptions {
  int edit_budget = 6;
  int beam_width = 64;
  // Layout evaluations the exact search may spend before handing over to
  // the beam search.
  long node_limit = 20000;
};

// Overlap-free cut tree with the fewest arc swaps away from the blooming
// tree. Exact while the search stays inside the budget; otherwise the
// result is a beam-search tree flagged `heuristic`. When no overlap-free
// tree is found the best tree comes back with `residual_overlaps` set.
CutTree nearly_blooming(const TriMesh& mesh, int root, const NearlyBloomingOptions& opts = {});

// Faces in the component that leaves `root` when arc `edge` is removed.
std::vector<int> detached_side(const TriMesh& mesh, const CutTree& tree, int edge);
// Non-tree arcs that reconnect the two sides after removing `edge`.
std::vector<int> reconnecting_arcs(const TriMesh& mesh, const CutTree& tree, int edge);
// Tree arcs on the path between faces a and b.
std::vector<int> tree_path_arcs(const CutTree& tree, int a, int b);

struct GaOptions {
  int population = 16;
  int generations = 20;
  std::uint64_t seed = 0;
  double mutation_sigma = 0.15;
  int tournament = 2;
  double step_deg = 1.0;  // MP dry-run resolution used by the fitness
};

// Genetic-algorithm baseline: one weight per dual arc, decoded as the
// minimum spanning tree re-rooted at `root`. Fitness is the overlap count,
// then the fold completion of a traditional-planner dry run.
CutTree ga_unfold(const TriMesh& mesh, int root, const GaOptions& opts = {});
CutTree decode_chromosome(const TriMesh& mesh, int root, const std::vector<double>& weights);

}  // namespace foldnet
