// One PASS/FAIL line per acceptance criterion. Exit status is non-zero when
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "foldnet/cli.hpp"
#include "foldnet/errors.hpp"
#include "foldnet/fabricate.hpp"
#include "foldnet/optimize.hpp"
#include "foldnet/planner.hpp"
#include "foldnet/serialize.hpp"
#include "foldnet/unfold.hpp"
#include "oracles.hpp"

using namespace foldnet;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    note(why);
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

Net nb_net(const TriMesh& m) { return layout(m, nearly_blooming(m, choose_root(m))); }

Outcome round_trip() {
  Outcome o;
  for (const char* name : {"cube", "tetrahedron", "box_10x10x30", "l_prism", "blob180"}) {
    auto t = Clock::now();
    TriMesh m = fixture::corpus(name);
    Net net = nb_net(m);
    double rms = oracle::refold_rms(m, net, Configuration::folded(net));
    double s = seconds_since(t);
    if (!(rms < 1e-6)) o.fail(std::string(name) + " rms " + fmt("%.3g", rms));
    if (s >= 10.0) o.fail(std::string(name) + " took " + fmt("%.1f s", s));
    o.note(std::string(name) + " " + fmt("%.1e", rms) + " mm " + fmt("%.2f s", s));
  }
  return o;
}

Outcome convex_blooming() {
  Outcome o;
  for (const char* name : {"tetrahedron", "cube", "octahedron", "dodecahedron", "icosahedron"}) {
    auto t = Clock::now();
    TriMesh m = fixture::corpus(name);
    Net net = layout(m, blooming_tree(m, choose_root(m)));
    bool clean = detect_overlaps(net).empty();
    double s = seconds_since(t);
    if (!clean || !oracle::net_overlaps(net).empty()) o.fail(std::string(name) + " overlaps");
    if (s >= 1.0) o.fail(std::string(name) + " took " + fmt("%.2f s", s));
  }
  if (o.pass) o.note("five platonic solids overlap-free");
  return o;
}

Outcome nb_minimality() {
  Outcome o;
  for (const char* name : {"tetrahedron", "cube", "box_10x10x30", "octahedron", "l_prism"}) {
    auto t = Clock::now();
    TriMesh m = fixture::corpus(name);
    const int root = choose_root(m);
    CutTree nb = nearly_blooming(m, root);
    auto bloom = blooming_tree(m, root).arcs();
    int best = 1 << 30;
    for (const auto& arcs : oracle::spanning_trees(m)) {
      if (!oracle::net_overlaps(layout(m, CutTree::from_arcs(m, root, arcs))).empty()) continue;
      best = std::min(best, arc_difference(arcs, bloom));
    }
    double s = seconds_since(t);
    if (nb.edit_count != best)
      o.fail(std::string(name) + " edits " + std::to_string(nb.edit_count) + " vs " + std::to_string(best));
    if (s >= 60.0) o.fail(std::string(name) + " took " + fmt("%.1f s", s));
    o.note(std::string(name) + " " + std::to_string(nb.edit_count));
  }
  return o;
}

Outcome planner_dominance() {
  Outcome o;
  for (const char* name : {"cube", "tetrahedron", "box_10x10x30", "octahedron", "dodecahedron", "icosahedron", "l_prism",
                           "t_prism", "u_prism", "plus_prism", "stairs_prism", "blob180"}) {
    TriMesh m = fixture::corpus(name);
    Net net = nb_net(m);
    double mp = completion(net, plan_mp(net).final_config.q);
    double fp = completion(net, plan_fp(net).final_config.q);
    if (fp < mp - 1e-9) o.fail(std::string(name) + " FP " + fmt("%.2f", fp) + " < MP " + fmt("%.2f", mp));
  }
  const std::vector<std::pair<const char*, Net>> fixtures = {{"occlusion", fixture::occlusion()},
                                                             {"blocking", fixture::blocking()}};
  for (const auto& [name, net] : fixtures) {
    auto t = Clock::now();
    double fp = completion(net, plan_fp(net).final_config.q);
    double s = seconds_since(t);
    auto best = oracle::best_interleaving(net, PlannerConfig{}.lookahead);
    if (std::abs(fp - best.best) > 1e-9)
      o.fail(std::string(name) + " FP " + fmt("%.2f", fp) + " vs max " + fmt("%.2f", best.best));
    if (s >= 120.0) o.fail(std::string(name) + " took " + fmt("%.1f s", s));
    o.note(std::string(name) + " FP " + fmt("%.2f", fp) + " = max " + fmt("%.2f", best.best));
  }
  return o;
}

struct Ranking {
  double nb_mp = 0, nb_fp = 0, ga_mp = 0, ga_fp = 0;
  double f_nb = 0, f_ga = 0;
  double seconds = 0;
};

Ranking method_ranking() {
  auto t = Clock::now();
  Ranking r;
  const char* meshes[] = {"l_prism", "t_prism", "u_prism", "plus_prism", "stairs_prism"};
  const int seeds = 5;
  Calibration calib;
  for (const char* name : meshes) {
    TriMesh m = fixture::corpus(name);
    const int root = choose_root(m);
    // nearly-blooming is seed-free: one run stands for every seed
    Net nb = layout(m, nearly_blooming(m, root));
    Substrate g = make_substrate(nb);
    r.nb_mp += verify(nb, g, plan_mp(nb), calib).completion;
    PlanReport fp = verify(nb, g, plan_fp(nb), calib);
    r.nb_fp += fp.completion;
    r.f_nb += fp.clipped;
    for (int seed = 0; seed < seeds; ++seed) {
      GaOptions go;
      go.seed = static_cast<std::uint64_t>(seed);
      Net ga = layout(m, ga_unfold(m, root, go));
      Substrate gg = make_substrate(ga);
      r.ga_mp += verify(ga, gg, plan_mp(ga), calib).completion / seeds;
      PlanReport gf = verify(ga, gg, plan_fp(ga), calib);
      r.ga_fp += gf.completion / seeds;
      r.f_ga += static_cast<double>(gf.clipped) / seeds;
    }
  }
  const double n = std::size(meshes);
  r.nb_mp /= n;
  r.nb_fp /= n;
  r.ga_mp /= n;
  r.ga_fp /= n;
  r.f_nb /= n;
  r.f_ga /= n;
  r.seconds = seconds_since(t);
  return r;
}

Outcome ranking_outcome(const Ranking& r) {
  Outcome o;
  o.note("NB+FP " + fmt("%.2f", r.nb_fp) + " GA+FP " + fmt("%.2f", r.ga_fp) + " NB+MP " + fmt("%.2f", r.nb_mp) +
         " GA+MP " + fmt("%.2f", r.ga_mp));
  if (r.nb_fp < r.ga_fp) o.fail("NB+FP < GA+FP");
  if (r.ga_fp < r.nb_mp) o.fail("GA+FP < NB+MP");
  if (r.nb_fp < r.ga_mp) o.fail("NB+FP < GA+MP");
  if (r.nb_fp < 90.0) o.fail("NB+FP below 90");
  if (r.seconds >= 1800.0) o.fail("took " + fmt("%.0f s", r.seconds));
  return o;
}

Outcome substrate_outcome(const Ranking& r) {
  Outcome o;
  o.note("mean F NB " + fmt("%.1f", r.f_nb) + " GA " + fmt("%.1f", r.f_ga));
  if (r.f_nb > r.f_ga) o.fail("NB clips more than GA");
  return o;
}

Outcome optimizer() {
  auto t = Clock::now();
  Outcome o;
  Calibration calib;
  TriMesh tray = fixture::l_tray();
  CutTree t0 = nearly_blooming(tray, 0);
  OptConfig cfg;
  cfg.iterations = 500;
  OptResult r = optimize_net(tray, t0, calib, cfg);
  if (lexicographically_better(r.initial, r.report)) o.fail("tray result worse than start");
  int found = -1;
  for (const auto& s : r.trace)
    if (s.feasible && s.clipped < r.initial.clipped && s.completion >= r.initial.completion - 1e-9) {
      found = s.iteration;
      break;
    }
  if (found < 0) o.fail("no F-improving edit on the tray");
  o.note("tray F " + std::to_string(r.initial.clipped) + " -> " + std::to_string(r.report.clipped) + ", E " +
         fmt("%.0f", r.initial.energy) + " -> " + fmt("%.0f", r.report.energy) + ", first improvement at iteration " +
         std::to_string(found));
  for (const char* name : {"cube", "l_prism", "t_prism"}) {
    TriMesh m = fixture::corpus(name);
    for (std::uint64_t seed : {1, 2}) {
      OptConfig c;
      c.iterations = 30;
      c.seed = seed;
      OptResult q = optimize_net(m, nearly_blooming(m, choose_root(m)), calib, c);
      if (lexicographically_better(q.initial, q.report)) o.fail(std::string(name) + " got worse");
    }
  }
  double s = seconds_since(t);
  if (s >= 600.0) o.fail("took " + fmt("%.0f s", s));
  return o;
}

std::string verdict(const SweepResult& r) { return r.clear() ? "clear" : to_string(r.violation); }

std::string plan_verdict(const Net& net, const Substrate& grid, Plan p, double step) {
  p.step_deg = step;
  try {
    verify(net, grid, p, Calibration{});
    return "pass";
  } catch (const VerificationError& e) {
    return e.predicate();
  }
}

Outcome sweep_stability() {
  Outcome o;
  TriMesh tray = fixture::l_tray();
  TriMesh cube = fixture::corpus("cube");
  const std::vector<std::pair<std::string, Net>> nets = {
      {"one_crease+90", fixture::one_crease(90.0)},  {"one_crease-90", fixture::one_crease(-90.0)},
      {"occlusion", fixture::occlusion()},           {"blocking", fixture::blocking()},
      {"visibility_wall", fixture::visibility_wall(5.0)}, {"flat_flap", fixture::flat_flap()},
      {"open_box", fixture::open_box()},             {"wing_through_wall", fixture::wing_through_wall()},
      {"chain", fixture::chain(4, 180.0)},           {"tray", nb_net(tray)},
      {"cube", nb_net(cube)}};
  int checks = 0;
  for (const auto& [name, net] : nets) {
    Substrate grid = make_substrate(net);
    for (int k = 0; k < net.crease_count(); ++k) {
      Configuration flat = Configuration::flat(net);
      auto a = sweep_fold(net, flat, k, 1.0, &grid, {1.0, false, true});
      auto b = sweep_fold(net, flat, k, 1.0, &grid, {0.1, false, true});
      ++checks;
      if (verdict(a) != verdict(b)) o.fail(name + " crease " + std::to_string(k) + ": " + verdict(a) + " vs " + verdict(b));
      if (!std::includes(a.cells.begin(), a.cells.end(), b.cells.begin(), b.cells.end()))
        o.fail(name + " crease " + std::to_string(k) + " coarse cells miss fine ones");
    }
    for (const Plan& p : {plan_mp(net), plan_fp(net)}) {
      ++checks;
      std::string va = plan_verdict(net, grid, p, 1.0), vb = plan_verdict(net, grid, p, 0.1);
      if (va != vb) o.fail(name + " " + p.planner + " plan: " + va + " vs " + vb);
      auto coarse = clip_plan(net, p, grid, 1.0).clipped;
      auto fine = clip_plan(net, p, grid, 0.1).clipped;
      if (!std::includes(coarse.begin(), coarse.end(), fine.begin(), fine.end()))
        o.fail(name + " " + p.planner + " plan: coarse clip set misses fine cells");
    }
  }
  o.note(std::to_string(checks) + " verdict pairs on " + std::to_string(nets.size()) + " fixtures");
  return o;
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  return run_cli(args, out, err);
}

bool lfi_conforms(const std::string& text, std::string& why) {
  static const std::string num = R"(-?\d+\.\d{4})";
  static const std::regex cut("CUT( " + num + " " + num + "){2,}");
  static const std::regex fold("FOLD \\d+( " + num + "){4} ANGLE " + num + " PASSES \\d+ POWER " + num + " SPEED " + num);
  static const std::regex calib("CALIB [0-9a-f]{64}");
  std::istringstream in(text);
  std::vector<std::string> lines;
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  if (lines.size() < 4 || lines[0] != "LFI 1" || lines[1] != "UNITS MM" || !std::regex_match(lines[2], calib) ||
      lines.back() != "END") {
    why = "header or trailer";
    return false;
  }
  for (size_t i = 3; i + 1 < lines.size(); ++i) {
    const auto& l = lines[i];
    if (l == "FLIP" || std::regex_match(l, cut) || std::regex_match(l, fold)) continue;
    why = "line " + std::to_string(i + 1) + ": " + l;
    return false;
  }
  return text.back() == '\n';
}

std::vector<std::string> manifest_args(const RunManifest& m, const fs::path& out) {
  return {"pipeline", m.mesh_path,          "--method",    m.method,     "--root",
          m.root,     "--planner",          m.planner,     "--step-deg", fmt("%.17g", m.step_deg),
          "--max-flips", std::to_string(m.max_flips), "--seed", std::to_string(m.seed), "--out-dir", out.string()};
}

Outcome determinism() {
  Outcome o;
  const fs::path base = fs::temp_directory_path() / "foldnet_acceptance";
  fs::remove_all(base);
  struct Case {
    std::string mesh;
    std::vector<std::string> extra;
  };
  const std::vector<Case> cases = {{"cube", {}},
                                   {"l_prism", {"--planner", "mp"}},
                                   {"t_prism", {"--method", "ga", "--seed", "3"}},
                                   {"blob180", {}}};
  int idx = 0;
  for (const auto& c : cases) {
    fs::path first = base / (c.mesh + "_" + std::to_string(idx++));
    fs::create_directories(first);
    std::vector<std::string> args = {"pipeline", (fixture::data_dir() / (c.mesh + ".obj")).string(), "--out-dir",
                                     first.string()};
    args.insert(args.end(), c.extra.begin(), c.extra.end());
    if (cli(args) != kExitOk) {
      o.fail(c.mesh + " pipeline failed");
      continue;
    }
    RunManifest m = RunManifest::from_json(read_file(first / "manifest.json"));
    fs::path again = first.string() + "_again";
    fs::create_directories(again);
    if (cli(manifest_args(m, again)) != kExitOk) {
      o.fail(c.mesh + " manifest replay failed");
      continue;
    }
    for (const char* f : {"net.json", "plan.json", "job.lfi"})
      if (read_file(first / f) != read_file(again / f)) o.fail(c.mesh + " " + f + " differs on replay");
    std::string why;
    if (!lfi_conforms(read_file(first / "job.lfi"), why)) o.fail(c.mesh + " job.lfi grammar: " + why);
  }
  fs::path golden = fs::path(FOLDNET_GOLDEN_DIR) / "cube.lfi";
  fs::path cube = base / "cube_0" / "job.lfi";
  if (!fs::exists(golden)) o.fail("missing golden file");
  else if (read_file(golden) != read_file(cube)) o.fail("cube job.lfi differs from golden file");
  if (o.pass) o.note("4 manifests replay byte-identically; cube job matches golden file");
  return o;
}

Plan straight_plan(const Net& net) {
  Plan p;
  Configuration c = Configuration::flat(net);
  for (const auto& batch : depth_schedule(net))
    for (int k : batch) {
      c.q[k] = 1.0;
      p.append(Action::fold(k, 0.0, 1.0), c);
    }
  return p;
}

Outcome energy_model() {
  Outcome o;
  Calibration calib;  // 40 W, 50 mm/s, 0.5 passes/deg
  calib.flip_cost = 12.5;
  TriMesh cube = fixture::corpus("cube");
  Net cnet = layout(cube, blooming_tree(cube, 0));
  const double fold = energy(straight_plan(cnet), cnet, calib).fold;
  // five 90 deg creases, 10 mm hinges: 45 passes each at 40 W * 10 mm / 50 mm/s
  const double expected = 5.0 * 45.0 * 40.0 * 10.0 / 50.0;
  if (std::abs(fold - 1800.0) > 1e-9 * 1800.0 || std::abs(fold - expected) > 1e-9 * expected)
    o.fail("cube E_fold " + fmt("%.9f", fold));

  for (const Net& net : {fixture::blocking(), cnet, nb_net(fixture::corpus("u_prism"))}) {
    Plan full = plan_fp(net);
    for (size_t cut = 0; cut <= full.actions.size(); ++cut) {
      Plan a, b;
      a.actions.assign(full.actions.begin(), full.actions.begin() + cut);
      b.actions.assign(full.actions.begin() + cut, full.actions.end());
      auto ef = energy(full, net, calib), ea = energy(a, net, calib), eb = energy(b, net, calib);
      const double lhs = ef.fold + ef.flip, rhs = ea.fold + ea.flip + eb.fold + eb.flip;
      if (std::abs(lhs - rhs) > 1e-9 * std::max(1.0, lhs)) {
        o.fail("additivity breaks at split " + std::to_string(cut));
        break;
      }
    }
  }
  for (const Net& net : {cnet, fixture::blocking(), fixture::chain(4, 120.0)}) {
    Plan p = straight_plan(net);
    Calibration one = calib, two = calib;
    one.passes_per_degree = 1.0;
    two.passes_per_degree = 2.0;
    double e1 = energy(p, net, one).fold, e2 = energy(p, net, two).fold;
    if (std::abs(e2 - 2.0 * e1) > 1e-9 * e2) o.fail("fold energy not linear in passes per degree");
  }
  if (o.pass) o.note("cube E_fold " + fmt("%.6f", fold) + " J");
  return o;
}

void report(int n, const char* title, const Outcome& o, bool& all) {
  std::printf("criterion %2d %s  %s: %s\n", n, o.pass ? "PASS" : "FAIL", title, o.detail.c_str());
  std::fflush(stdout);
  all = all && o.pass;
}

}  // namespace

int main() {
  bool all = true;
  report(1, "round-trip kinematics", round_trip(), all);
  report(2, "convex blooming", convex_blooming(), all);
  report(3, "nearly-blooming minimality", nb_minimality(), all);
  report(4, "planner dominance", planner_dominance(), all);
  Ranking r = method_ranking();
  report(5, "method ranking", ranking_outcome(r), all);
  report(6, "substrate direction", substrate_outcome(r), all);
  report(7, "optimizer monotonicity", optimizer(), all);
  report(8, "sweep stability", sweep_stability(), all);
  report(9, "determinism", determinism(), all);
  report(10, "energy model", energy_model(), all);
  return all ? 0 : 1;
}
