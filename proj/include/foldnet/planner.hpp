#pragma once

#include <set>
#include <string>
#include <vector>

#include "foldnet/foldsim.hpp"
#include "foldnet/net.hpp"
#include "foldnet/substrate.hpp"

namespace foldnet {

struct Calibration;

struct Action {
  enum class Kind { Fold, Flip };
  Kind kind = Kind::Fold;
  int crease = -1;  // index into Net::creases()
  double from = 0.0;
  double to = 0.0;

  static Action fold(int k, double from, double to) { return {Kind::Fold, k, from, to}; }
  static Action flip() { return {Kind::Flip, -1, 0.0, 0.0}; }
  bool is_fold() const { return kind == Kind::Fold; }
  bool is_unfold(const Net& net) const;  // moves against the crease target
};

struct Plan {
  std::string planner;
  double step_deg = 1.0;
  std::vector<Action> actions;
  std::vector<Configuration> snapshots;    // configuration after each action
  std::vector<std::vector<int>> clipped;   // cells penetrated during each action
  Configuration final_config;
  bool fully_folded = false;
  bool heuristic = false;

  int flips() const;
  void append(const Action& a, const Configuration& after);
};

struct PlanReport {
  double completion = 0.0;  // percent
  double energy = 0.0;      // J
  int clipped = 0;          // F
  int flips = 0;
  double unfold_work = 0.0;  // re-opened rad * mm
};

struct PlannerConfig {
  double step_deg = 1.0;
  int max_flips = 64;
  // Retract moves (temporary unfolding) a plan may contain.
  int lookahead = 4;
  double unfold_penalty = 2.0;
  long node_budget = 4000;
};

// Creases grouped by depth, deepest batch first, ascending ids inside.
std::vector<std::vector<int>> depth_schedule(const Net& net);

double completion(const Net& net, const std::vector<double>& q);

// Outside-in: a crease makes its first move before any of its ancestors
// moves. Later moves of a started crease (re-opening, re-closing) are free.
bool outside_in_admissible(const Net& net, const std::vector<Action>& actions);

// Traditional planner: outside-in batches, one attempt per crease, freeze
// at the last clear fraction, never revisit.
Plan plan_mp(const Net& net, const PlannerConfig& cfg = {});

// As-folded-as-possible planner: best-first search over fold, retract and
// flip moves; never worse than plan_mp on the same net.
Plan plan_fp(const Net& net, const PlannerConfig& cfg = {});

double unfold_work(const Net& net, const Plan& plan);

// Union of penetrated cells over every sweep step of the plan. Also
// records the per-action cells into `plan.clipped` when given.
Substrate clip_plan(const Net& net, Plan& plan, Substrate substrate);
Substrate clip_plan(const Net& net, const Plan& plan, Substrate substrate, double step_deg);

// Replays the plan at half the plan's step and rebuilds the report.
// Throws VerificationError naming the failing step and predicate.
PlanReport verify(const Net& net, const Substrate& grid, const Plan& plan, const Calibration& calib);

}  // namespace foldnet
