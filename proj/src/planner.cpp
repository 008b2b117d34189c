#include "foldnet/planner.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <queue>

#include "foldnet/errors.hpp"
#include "foldnet/fabricate.hpp"

namespace foldnet {

namespace {
constexpr double kFracEps = 1e-9;
}

bool Action::is_unfold(const Net&) const { return kind == Kind::Fold && to < from; }

int Plan::flips() const {
  return static_cast<int>(std::count_if(actions.begin(), actions.end(), [](const Action& a) { return !a.is_fold(); }));
}

void Plan::append(const Action& a, const Configuration& after) {
  actions.push_back(a);
  snapshots.push_back(after);
  final_config = after;
}

std::vector<std::vector<int>> depth_schedule(const Net& net) {
  std::map<int, std::vector<int>, std::greater<>> by_depth;
  for (int k = 0; k < net.crease_count(); ++k) by_depth[net.creases()[k].depth].push_back(k);
  std::vector<std::vector<int>> out;
  for (auto& [d, ks] : by_depth) out.push_back(std::move(ks));  // ks already ascending
  return out;
}

double completion(const Net& net, const std::vector<double>& q) {
  double done = 0.0, total = 0.0;
  for (int k = 0; k < net.crease_count(); ++k) {
    const auto& c = net.creases()[k];
    if (c.trivial) continue;
    double w = std::abs(c.target);
    total += w;
    done += std::clamp(q[k], 0.0, 1.0) * w;
  }
  return total > 0.0 ? 100.0 * done / total : 100.0;
}

bool outside_in_admissible(const Net& net, const std::vector<Action>& actions) {
  std::vector<char> moved(net.crease_count(), 0);
  for (const auto& a : actions) {
    if (!a.is_fold()) continue;
    if (!moved[a.crease])
      for (int j = 0; j < net.crease_count(); ++j)
        if (moved[j] && net.is_ancestor(j, a.crease)) return false;
    moved[a.crease] = 1;
  }
  return true;
}

double unfold_work(const Net& net, const Plan& plan) {
  double w = 0.0;
  for (const auto& a : plan.actions)
    if (a.is_unfold(net))
      w += std::abs((a.from - a.to) * net.creases()[a.crease].target) * net.hinge_length(a.crease);
  return w;
}

namespace {

bool fully_folded(const Net& net, const Configuration& cfg) {
  for (int k = 0; k < net.crease_count(); ++k)
    if (!net.creases()[k].trivial && cfg.q[k] < 1.0 - kFracEps) return false;
  return true;
}

// A crease that has never moved may not start once an ancestor has moved.
// Creases already under way stay free to re-open or re-close.
std::vector<char> locked_creases(const Net& net, const std::vector<char>& moved) {
  std::vector<char> ancestor_moved(net.crease_count(), 0), locked(net.crease_count(), 0);
  for (int f : net.preorder()) {
    int k = net.faces()[f].crease;
    if (k < 0) continue;
    int pk = net.faces()[net.faces()[f].parent].crease;
    if (pk >= 0) ancestor_moved[k] = moved[pk] || ancestor_moved[pk];
    locked[k] = ancestor_moved[k] && !moved[k];
  }
  return locked;
}

struct Step {
  std::vector<Action> actions;
  Configuration cfg;
};

// Rotate crease k toward `target`, turning the workpiece over first when
// the rotation would point away from the laser. Stops at the last clear
// sample; fails when no progress is possible.
std::optional<Step> try_move(const Net& net, const Configuration& cfg, int k, double target, int flips_left,
                             double check_step) {
  const double q = cfg.q[k];
  const double delta = (target - q) * net.creases()[k].target;
  if (std::abs(target - q) < kFracEps || delta == 0.0) return std::nullopt;
  const int need = delta > 0.0 ? 1 : -1;
  Step step{{}, cfg};
  FoldedState s = fold_state(net, cfg);
  int side = laser_side(net, s, k);
  if (side == 0) return std::nullopt;
  if (side != need) {
    if (flips_left <= 0) return std::nullopt;
    if (!sweep_flip(net, cfg, nullptr, {check_step, false, false}).clear()) return std::nullopt;
    step.cfg.flipped = !step.cfg.flipped;
    step.actions.push_back(Action::flip());
  }
  auto res = sweep_fold(net, step.cfg, k, target, nullptr, {check_step, false, false});
  if (std::abs(res.last_clear - q) < kFracEps) return std::nullopt;
  step.actions.push_back(Action::fold(k, q, res.last_clear));
  step.cfg.q[k] = res.last_clear;
  return step;
}

Plan replay_actions(const Net& net, const std::vector<Action>& actions, const std::string& name, double step_deg) {
  Plan plan;
  plan.planner = name;
  plan.step_deg = step_deg;
  Configuration cfg = Configuration::flat(net);
  plan.final_config = cfg;
  for (const auto& a : actions) {
    if (a.is_fold()) cfg.q[a.crease] = a.to;
    else cfg.flipped = !cfg.flipped;
    plan.append(a, cfg);
  }
  plan.fully_folded = fully_folded(net, cfg);
  return plan;
}

double fold_work(const Net& net, const Action& a) {
  if (!a.is_fold()) return 0.0;
  return std::abs((a.to - a.from) * net.creases()[a.crease].target) * net.hinge_length(a.crease);
}

}  // namespace

Plan plan_mp(const Net& net, const PlannerConfig& cfg) {
  if (!net.overlaps().empty()) throw RefusedError("net has overlapping faces");
  const double check = cfg.step_deg / 2.0;
  Configuration state = Configuration::flat(net);
  std::vector<Action> actions;
  int flips = 0;
  for (const auto& batch : depth_schedule(net)) {
    for (int k : batch) {
      if (net.creases()[k].trivial) continue;
      auto step = try_move(net, state, k, 1.0, cfg.max_flips - flips, check);
      if (!step) continue;
      for (const auto& a : step->actions) {
        if (!a.is_fold()) ++flips;
        actions.push_back(a);
      }
      state = step->cfg;
    }
  }
  return replay_actions(net, actions, "mp", cfg.step_deg);
}

namespace {

// Rotate k toward target. With a blocker: open the blocker to `retract`
// first, then move k, then re-close the blocker as far as it goes.
struct Move {
  int k = -1;
  double target = 1.0;
  int blocker = -1;
  double retract = 0.0;
};

struct Node {
  Configuration cfg;
  std::vector<char> moved;
  std::vector<Action> actions;
  double comp = 0.0;
  double ub = 0.0;
  double unfold = 0.0;
  double work = 0.0;
  int flips = 0;
  int retracts = 0;
  long seq = 0;
  bool expanded = false;
  std::vector<Move> moves;
  size_t next = 0;
};

struct Score {
  double comp, unfold, work;
};

bool better(const Score& a, const Score& b) {
  if (a.comp > b.comp + kFracEps) return true;
  if (a.comp < b.comp - kFracEps) return false;
  if (a.unfold < b.unfold - kFracEps) return true;
  if (a.unfold > b.unfold + kFracEps) return false;
  return a.work < b.work - kFracEps;
}

class FpSearch {
 public:
  FpSearch(const Net& net, const PlannerConfig& cfg) : net_(net), cfg_(cfg) {
    for (const auto& c : net.creases())
      if (!c.trivial) total_ += std::abs(c.target);
    schedule_.reserve(net.crease_count());
    for (const auto& batch : depth_schedule(net))
      for (int k : batch)
        if (!net.creases()[k].trivial) schedule_.push_back(k);
  }

  Plan run(const Plan& baseline) {
    best_actions_ = baseline.actions;
    best_ = {completion(net_, baseline.final_config.q), unfold_work(net_, baseline), 0.0};
    for (const auto& a : baseline.actions) best_.work += fold_work(net_, a);

    auto root = std::make_unique<Node>();
    root->cfg = Configuration::flat(net_);
    root->moved.assign(net_.crease_count(), 0);
    finish_node(*root);
    push(std::move(root));

    long spent = 0;
    bool exhausted = false;
    while (!queue_.empty()) {
      Node* n = pop();
      if (prunable(*n)) continue;
      if (spent >= cfg_.node_budget) {
        exhausted = true;
        break;
      }
      if (!n->expanded) generate_moves(*n);
      if (n->next >= n->moves.size()) continue;
      const Move mv = n->moves[n->next++];
      requeue(n);
      ++spent;
      auto step = apply(*n, mv);
      if (!step) continue;
      auto child = std::make_unique<Node>();
      child->cfg = step->cfg;
      child->moved = n->moved;
      child->moved[mv.k] = 1;
      child->actions = n->actions;
      child->flips = n->flips;
      child->unfold = n->unfold;
      child->work = n->work;
      child->retracts = n->retracts + (mv.blocker >= 0 || mv.target < n->cfg.q[mv.k] ? 1 : 0);
      for (const auto& a : step->actions) {
        child->actions.push_back(a);
        if (!a.is_fold()) ++child->flips;
        if (a.is_unfold(net_)) child->unfold += fold_work(net_, a);
        child->work += fold_work(net_, a);
      }
      finish_node(*child);
      if (!remember(*child)) continue;
      Score s{child->comp, child->unfold, child->work};
      if (better(s, best_)) {
        best_ = s;
        best_actions_ = child->actions;
      }
      push(std::move(child));
    }
    Plan plan = replay_actions(net_, best_actions_, "fp", cfg_.step_deg);
    plan.heuristic = exhausted;
    return plan;
  }

 private:
  void finish_node(Node& n) {
    n.comp = completion(net_, n.cfg.q);
    auto locked = locked_creases(net_, n.moved);
    double reach = 0.0;
    for (int k = 0; k < net_.crease_count(); ++k) {
      const auto& c = net_.creases()[k];
      if (c.trivial) continue;
      reach += std::abs(c.target) * (locked[k] ? n.cfg.q[k] : 1.0);
    }
    n.ub = total_ > 0.0 ? 100.0 * reach / total_ : 100.0;
    n.seq = seq_++;
  }

  std::optional<Step> apply(const Node& n, const Move& mv) const {
    const double check = cfg_.step_deg / 2.0;
    if (mv.blocker < 0) return try_move(net_, n.cfg, mv.k, mv.target, cfg_.max_flips - n.flips, check);
    int flips = n.flips;
    auto open = try_move(net_, n.cfg, mv.blocker, mv.retract, cfg_.max_flips - flips, check);
    if (!open) return std::nullopt;
    flips += count_flips(open->actions);
    auto main = try_move(net_, open->cfg, mv.k, mv.target, cfg_.max_flips - flips, check);
    if (!main) return std::nullopt;
    flips += count_flips(main->actions);
    Step out{open->actions, main->cfg};
    out.actions.insert(out.actions.end(), main->actions.begin(), main->actions.end());
    if (auto close = try_move(net_, out.cfg, mv.blocker, 1.0, cfg_.max_flips - flips, check)) {
      out.actions.insert(out.actions.end(), close->actions.begin(), close->actions.end());
      out.cfg = close->cfg;
    }
    return out;
  }

  static int count_flips(const std::vector<Action>& actions) {
    return static_cast<int>(std::count_if(actions.begin(), actions.end(), [](const Action& a) { return !a.is_fold(); }));
  }

  void generate_moves(Node& n) {
    n.expanded = true;
    auto locked = locked_creases(net_, n.moved);
    for (int k : schedule_)
      if (!locked[k] && n.cfg.q[k] < 1.0 - kFracEps) n.moves.push_back({k, 1.0});
    if (n.retracts >= cfg_.lookahead) return;
    // Stuck crease k, started descendant j: open j, move k, re-close j.
    for (int k : schedule_) {
      if (locked[k] || !n.moved[k] || n.cfg.q[k] >= 1.0 - kFracEps) continue;
      for (int j : schedule_) {
        if (j == k || !n.moved[j] || n.cfg.q[j] <= kFracEps || !net_.is_ancestor(k, j)) continue;
        n.moves.push_back({k, 1.0, j, 0.5 * n.cfg.q[j]});
        n.moves.push_back({k, 1.0, j, 0.0});
      }
    }
    for (int k : schedule_) {
      if (locked[k] || n.cfg.q[k] <= kFracEps) continue;
      n.moves.push_back({k, 0.5 * n.cfg.q[k]});
      n.moves.push_back({k, 0.0});
    }
  }

  bool prunable(const Node& n) const {
    if (n.ub < best_.comp - kFracEps) return true;
    return n.ub <= best_.comp + kFracEps && n.unfold >= best_.unfold - kFracEps;
  }

  // False when an equivalent state was already reached at no higher cost.
  bool remember(const Node& n) {
    std::vector<long long> key;
    key.reserve(2 * n.cfg.q.size() + 1);
    for (double q : n.cfg.q) key.push_back(std::llround(q * 1e9));
    key.push_back(n.cfg.flipped ? 1 : 0);
    for (char m : n.moved) key.push_back(m);
    auto it = visited_.find(key);
    if (it != visited_.end() && it->second.first <= n.unfold + kFracEps && it->second.second <= n.work + kFracEps)
      return false;
    visited_[key] = {n.unfold, n.work};
    return true;
  }

  struct Order {
    double penalty;
    bool operator()(const Node* a, const Node* b) const {
      // std::priority_queue pops the largest; "a < b" means b goes first.
      if (std::abs(a->comp - b->comp) > kFracEps) return a->comp < b->comp;
      if (a->ub != b->ub) return a->ub < b->ub;
      if (std::abs(a->unfold - b->unfold) > kFracEps) return a->unfold > b->unfold;
      double ca = a->work + penalty * a->unfold, cb = b->work + penalty * b->unfold;
      if (std::abs(ca - cb) > kFracEps) return ca > cb;
      return a->seq < b->seq;
    }
  };

  void push(std::unique_ptr<Node> n) {
    queue_.push(n.get());
    nodes_.push_back(std::move(n));
  }
  void requeue(Node* n) {
    if (n->next < n->moves.size()) queue_.push(n);
  }
  Node* pop() {
    Node* n = queue_.top();
    queue_.pop();
    return n;
  }

  const Net& net_;
  PlannerConfig cfg_;
  double total_ = 0.0;
  std::vector<int> schedule_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::priority_queue<Node*, std::vector<Node*>, Order> queue_{Order{cfg_.unfold_penalty}};
  std::map<std::vector<long long>, std::pair<double, double>> visited_;
  Score best_{0.0, 0.0, 0.0};
  std::vector<Action> best_actions_;
  long seq_ = 0;
};

}  // namespace

Plan plan_fp(const Net& net, const PlannerConfig& cfg) {
  if (!net.overlaps().empty()) throw RefusedError("net has overlapping faces");
  Plan mp = plan_mp(net, cfg);
  FpSearch search(net, cfg);
  Plan fp = search.run(mp);
  const double c_fp = completion(net, fp.final_config.q), c_mp = completion(net, mp.final_config.q);
  if (c_fp < c_mp - kFracEps) throw Error("fp planner fell below the traditional planner");
  return fp;
}

Substrate clip_plan(const Net& net, const Plan& plan, Substrate substrate, double step_deg) {
  substrate.clipped.clear();
  Configuration cfg = Configuration::flat(net);
  SweepOptions opts{step_deg, false, true};
  for (const auto& a : plan.actions) {
    SweepResult r = a.is_fold() ? sweep_fold(net, cfg, a.crease, a.to, &substrate, opts)
                                : sweep_flip(net, cfg, &substrate, opts);
    substrate.clipped.insert(r.cells.begin(), r.cells.end());
    if (a.is_fold()) cfg.q[a.crease] = a.to;
    else cfg.flipped = !cfg.flipped;
  }
  return substrate;
}

Substrate clip_plan(const Net& net, Plan& plan, Substrate substrate) {
  substrate.clipped.clear();
  plan.clipped.assign(plan.actions.size(), {});
  Configuration cfg = Configuration::flat(net);
  SweepOptions opts{plan.step_deg, false, true};
  for (size_t i = 0; i < plan.actions.size(); ++i) {
    const auto& a = plan.actions[i];
    SweepResult r = a.is_fold() ? sweep_fold(net, cfg, a.crease, a.to, &substrate, opts)
                                : sweep_flip(net, cfg, &substrate, opts);
    plan.clipped[i].assign(r.cells.begin(), r.cells.end());
    substrate.clipped.insert(r.cells.begin(), r.cells.end());
    if (a.is_fold()) cfg.q[a.crease] = a.to;
    else cfg.flipped = !cfg.flipped;
  }
  return substrate;
}

PlanReport verify(const Net& net, const Substrate& grid, const Plan& plan, const Calibration& calib) {
  const double check = plan.step_deg / 2.0;
  Configuration cfg = Configuration::flat(net);
  std::vector<char> moved(net.crease_count(), 0);
  for (size_t i = 0; i < plan.actions.size(); ++i) {
    const auto& a = plan.actions[i];
    const int step = static_cast<int>(i);
    if (!a.is_fold()) {
      auto r = sweep_flip(net, cfg, nullptr, {check, false, false});
      if (!r.clear()) throw VerificationError(step, to_string(r.violation), "flip at step " + std::to_string(i) + " collides");
      cfg.flipped = !cfg.flipped;
      continue;
    }
    if (a.crease < 0 || a.crease >= net.crease_count())
      throw VerificationError(step, "malformed", "step " + std::to_string(i) + " names an unknown crease");
    if (a.to < 0.0 || a.to > 1.0 || std::abs(a.from - cfg.q[a.crease]) > kFracEps ||
        std::abs(a.to - a.from) < kFracEps)
      throw VerificationError(step, "malformed", "step " + std::to_string(i) + " has inconsistent fractions");
    for (int j = 0; j < net.crease_count() && !moved[a.crease]; ++j)
      if (moved[j] && net.is_ancestor(j, a.crease))
        throw VerificationError(step, "outside_in", "step " + std::to_string(i) + " moves a committed subtree");
    FoldedState s = fold_state(net, cfg);
    const double delta = (a.to - a.from) * net.creases()[a.crease].target;
    const int side = laser_side(net, s, a.crease);
    if (side == 0 || (delta > 0.0) != (side > 0))
      throw VerificationError(step, to_string(Predicate::Orientation),
                              "step " + std::to_string(i) + " rotates away from the laser");
    auto r = sweep_fold(net, cfg, a.crease, a.to, nullptr, {check, false, false});
    if (!r.clear())
      throw VerificationError(step, to_string(r.violation),
                              "step " + std::to_string(i) + " fails " + to_string(r.violation) + " at fraction " +
                                  std::to_string(r.violation_fraction));
    moved[a.crease] = 1;
    cfg.q[a.crease] = a.to;
  }
  PlanReport rep;
  rep.completion = completion(net, cfg.q);
  Substrate clipped = clip_plan(net, plan, grid, plan.step_deg);
  rep.clipped = static_cast<int>(clipped.clipped.size());
  rep.flips = plan.flips();
  rep.unfold_work = unfold_work(net, plan);
  rep.energy = energy(plan, net, calib, rep.clipped, grid.cell).total();
  return rep;
}

}  // namespace foldnet
