#include "foldnet/optimize.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <random>

#include "foldnet/errors.hpp"
#include "foldnet/unfold.hpp"

namespace foldnet {

namespace {

constexpr double kTie = 1e-9;

struct Candidate {
  CutTree tree;
  std::string edit;
  std::optional<PlanReport> report;  // empty when infeasible
};

std::optional<PlanReport> evaluate(const TriMesh& mesh, const CutTree& tree, const Calibration& calib,
                                   const OptConfig& cfg) {
  Net net = layout(mesh, tree);
  if (!net.overlaps().empty()) return std::nullopt;
  Plan plan = plan_fp(net, cfg.planner);
  Substrate grid = make_substrate(net, cfg.cell, cfg.thickness);
  try {
    return verify(net, grid, plan, calib);
  } catch (const VerificationError&) {
    return std::nullopt;
  }
}

}  // namespace

bool lexicographically_better(const PlanReport& a, const PlanReport& b) {
  if (a.completion > b.completion + kTie) return true;
  if (a.completion < b.completion - kTie) return false;
  if (a.clipped != b.clipped) return a.clipped < b.clipped;
  return a.energy < b.energy - kTie * std::max(1.0, std::abs(b.energy));
}

OptResult optimize_net(const TriMesh& mesh, const CutTree& tree0, const Calibration& calib, const OptConfig& cfg) {
  if (cfg.iterations < 0) throw ParameterError("iterations must be non-negative");
  if (!(cfg.initial_temperature > 0.0)) throw ParameterError("temperature must be positive");
  if (!(cfg.cooling > 0.0 && cfg.cooling <= 1.0)) throw ParameterError("cooling must lie in (0, 1]");
  if (cfg.batch < 1) throw ParameterError("batch must be at least 1");
  auto first = evaluate(mesh, tree0, calib, cfg);
  if (!first) throw RefusedError("initial tree is infeasible (overlapping net or unverifiable plan)");

  const double e_ref = std::max(first->energy, 1e-12);
  auto score = [&](const PlanReport& r) {
    return -cfg.completion_weight * r.completion + cfg.clipped_weight * r.clipped + cfg.energy_weight * r.energy / e_ref;
  };
  auto improves = [&](const PlanReport& a, const PlanReport& b) {
    return cfg.lexicographic ? lexicographically_better(a, b) : score(a) < score(b) - kTie;
  };

  OptResult out;
  out.tree = tree0;
  out.report = *first;
  out.initial = *first;
  CutTree current = tree0;
  PlanReport current_report = *first;
  std::map<std::pair<int, std::vector<int>>, std::optional<PlanReport>> cache;
  cache[{tree0.root, tree0.arcs()}] = first;

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double temperature = cfg.initial_temperature;
  int iteration = 0;
  while (iteration < cfg.iterations) {
    // Draw the batch serially so the edit sequence only depends on the seed.
    std::vector<Candidate> batch;
    for (int b = 0; b < cfg.batch && iteration + b < cfg.iterations; ++b) {
      Candidate c;
      if (cfg.mutate_root && unit(rng) < 0.1) {
        int root = std::uniform_int_distribution<int>(0, mesh.face_count() - 1)(rng);
        c.tree = CutTree::from_arcs(mesh, root, current.arcs());
        c.edit = "root:" + std::to_string(root);
      } else {
        auto arcs = current.arcs();
        if (arcs.empty()) break;
        int out_arc = arcs[std::uniform_int_distribution<size_t>(0, arcs.size() - 1)(rng)];
        auto options = reconnecting_arcs(mesh, current, out_arc);
        if (options.empty()) continue;
        int in_arc = options[std::uniform_int_distribution<size_t>(0, options.size() - 1)(rng)];
        arcs.erase(std::find(arcs.begin(), arcs.end(), out_arc));
        arcs.insert(std::lower_bound(arcs.begin(), arcs.end(), in_arc), in_arc);
        c.tree = CutTree::from_arcs(mesh, current.root, arcs);
        c.edit = std::to_string(out_arc) + "->" + std::to_string(in_arc);
      }
      batch.push_back(std::move(c));
    }
    if (batch.empty()) break;
    std::vector<char> cached(batch.size(), 0);
    for (size_t i = 0; i < batch.size(); ++i) {
      auto it = cache.find({batch[i].tree.root, batch[i].tree.arcs()});
      if (it != cache.end()) {
        batch[i].report = it->second;
        cached[i] = 1;
      }
    }
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < static_cast<int>(batch.size()); ++i)
      if (!cached[i]) batch[i].report = evaluate(mesh, batch[i].tree, calib, cfg);
    for (auto& c : batch) {
      cache[{c.tree.root, c.tree.arcs()}] = c.report;
      OptStep step;
      step.iteration = ++iteration;
      step.edit = c.edit;
      step.feasible = c.report.has_value();
      if (c.report) {
        step.completion = c.report->completion;
        step.clipped = c.report->clipped;
        step.energy = c.report->energy;
        // Draw unconditionally to keep the random stream independent of outcomes.
        double u = unit(rng);
        if (improves(*c.report, current_report)) {
          step.accepted = true;
        } else {
          double delta = score(*c.report) - score(current_report);
          step.accepted = u < std::exp(-std::max(delta, 0.0) / temperature);
        }
        if (step.accepted) {
          current = c.tree;
          current_report = *c.report;
          if (lexicographically_better(current_report, out.report)) {
            out.tree = current;
            out.report = current_report;
          }
        }
      }
      out.trace.push_back(step);
      temperature *= cfg.cooling;
    }
  }
  out.tree.edit_count = arc_difference(out.tree.arcs(), blooming_tree(mesh, out.tree.root).arcs());
  return out;
}

std::string trace_csv(const std::vector<OptStep>& trace) {
  std::string out = "iteration,edit,completion,F,E,accepted\n";
  char buf[160];
  for (const auto& s : trace) {
    if (s.feasible)
      std::snprintf(buf, sizeof buf, "%d,%s,%.6f,%d,%.6f,%d\n", s.iteration, s.edit.c_str(), s.completion, s.clipped,
                    s.energy, s.accepted ? 1 : 0);
    else
      std::snprintf(buf, sizeof buf, "%d,%s,,,,0\n", s.iteration, s.edit.c_str());
    out += buf;
  }
  return out;
}

}  // namespace foldnet
