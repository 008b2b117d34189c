#include <algorithm>
#include <numeric>
#include <random>

#include "foldnet/errors.hpp"
#include "foldnet/planner.hpp"
#include "foldnet/unfold.hpp"

namespace foldnet {

CutTree decode_chromosome(const TriMesh& mesh, int root, const std::vector<double>& weights) {
  const int ne = mesh.edge_count();
  if (static_cast<int>(weights.size()) != ne) throw ParameterError("chromosome length must equal the arc count");
  std::vector<int> order(ne);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weights[a] < weights[b]; });
  std::vector<int> uf(mesh.face_count());
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  std::vector<int> arcs;
  for (int e : order) {
    int a = find(mesh.edges()[e].f0), b = find(mesh.edges()[e].f1);
    if (a == b) continue;
    uf[a] = b;
    arcs.push_back(e);
  }
  std::sort(arcs.begin(), arcs.end());
  return CutTree::from_arcs(mesh, root, arcs);
}

namespace {

struct Fitness {
  int overlaps = 0;
  double completion = 0.0;
  bool operator<(const Fitness& o) const {  // "better than"
    if (overlaps != o.overlaps) return overlaps < o.overlaps;
    return completion > o.completion;
  }
};

Fitness evaluate(const TriMesh& mesh, int root, const std::vector<double>& genes, double step_deg) {
  CutTree tree = decode_chromosome(mesh, root, genes);
  Net net = layout(mesh, tree);
  Fitness f;
  f.overlaps = static_cast<int>(net.overlaps().size());
  if (f.overlaps == 0) {
    PlannerConfig cfg;
    cfg.step_deg = step_deg;
    f.completion = completion(net, plan_mp(net, cfg).final_config.q);
  }
  return f;
}

}  // namespace

CutTree ga_unfold(const TriMesh& mesh, int root, const GaOptions& opts) {
  if (opts.population < 1 || opts.generations < 0 || opts.tournament < 1 || opts.mutation_sigma < 0.0)
    throw ParameterError("invalid genetic-algorithm options");
  const int ne = mesh.edge_count();
  auto dual = dual_graph(mesh);
  if (!dual_connected(dual)) throw ConnectivityError("face-dual graph is disconnected");
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, opts.mutation_sigma);

  std::vector<std::vector<double>> pop(opts.population, std::vector<double>(ne));
  for (auto& genes : pop)
    for (double& w : genes) w = unit(rng);

  std::vector<Fitness> fit(opts.population);
  auto score_all = [&] {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < opts.population; ++i) fit[i] = evaluate(mesh, root, pop[i], opts.step_deg);
  };
  score_all();
  auto best_index = [&] {
    int b = 0;
    for (int i = 1; i < opts.population; ++i)
      if (fit[i] < fit[b]) b = i;
    return b;
  };
  std::vector<double> best = pop[best_index()];
  Fitness best_fit = fit[best_index()];

  std::uniform_int_distribution<int> pick(0, opts.population - 1);
  auto tournament = [&] {
    int w = pick(rng);
    for (int t = 1; t < opts.tournament; ++t) {
      int c = pick(rng);
      if (fit[c] < fit[w]) w = c;
    }
    return w;
  };
  for (int g = 0; g < opts.generations; ++g) {
    std::vector<std::vector<double>> next;
    next.push_back(best);  // elitism
    while (static_cast<int>(next.size()) < opts.population) {
      const auto& a = pop[tournament()];
      const auto& b = pop[tournament()];
      std::vector<double> child(ne);
      for (int e = 0; e < ne; ++e) child[e] = (unit(rng) < 0.5 ? a[e] : b[e]) + noise(rng);
      next.push_back(std::move(child));
    }
    pop = std::move(next);
    score_all();
    int b = best_index();
    if (fit[b] < best_fit) {
      best_fit = fit[b];
      best = pop[b];
    }
  }
  CutTree t = decode_chromosome(mesh, root, best);
  t.edit_count = arc_difference(t.arcs(), blooming_tree(mesh, root).arcs());
  t.heuristic = true;
  if (best_fit.overlaps > 0) t.residual_overlaps = layout(mesh, t).overlaps();
  return t;
}

}  // namespace foldnet
