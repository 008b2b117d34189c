#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "foldnet/fabricate.hpp"
#include "foldnet/mesh.hpp"
#include "foldnet/net.hpp"
#include "foldnet/planner.hpp"

namespace foldnet {

struct OptConfig {
  int iterations = 500;
  double initial_temperature = 1.0;
  double cooling = 0.99;  // temperature multiplier per iteration
  std::uint64_t seed = 0;
  // Lexicographic (completion, then F, then E) unless false, in which case
  // the weighted score below decides improvements as well.
  bool lexicographic = true;
  double completion_weight = 1.0;  // per percent
  double clipped_weight = 1.0;     // per cell
  double energy_weight = 10.0;     // per E / E(tree0)
  bool mutate_root = false;
  int batch = 1;  // candidates drawn per temperature step, evaluated concurrently
  PlannerConfig planner;
  double cell = 5.0;       // substrate cell, mm
  double thickness = 3.0;  // substrate slab, mm
};

struct OptStep {
  int iteration = 0;
  std::string edit;  // "<removed>-><added>" arc ids, or "root:<face>"
  bool feasible = false;
  double completion = 0.0;
  int clipped = 0;
  double energy = 0.0;
  bool accepted = false;
};

struct OptResult {
  CutTree tree;
  PlanReport report;
  PlanReport initial;
  std::vector<OptStep> trace;
};

// True when `a` beats `b` on (completion up, F down, E down).
bool lexicographically_better(const PlanReport& a, const PlanReport& b);

// Simulated annealing over single arc swaps of the cut tree. Returns the
// best tree seen, never worse than `tree0`. Throws RefusedError when
// tree0 overlaps or its plan does not verify.
OptResult optimize_net(const TriMesh& mesh, const CutTree& tree0, const Calibration& calib, const OptConfig& cfg = {});

std::string trace_csv(const std::vector<OptStep>& trace);

}  // namespace foldnet
