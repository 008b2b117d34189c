#include "foldnet/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "foldnet/errors.hpp"
#include "foldnet/fabricate.hpp"
#include "foldnet/optimize.hpp"
#include "foldnet/serialize.hpp"
#include "foldnet/unfold.hpp"
#include "json.hpp"

namespace foldnet {

namespace fs = std::filesystem;

namespace {

struct Infeasible : Error {
  using Error::Error;
};

struct UnfoldArgs {
  std::string method = "nb";
  std::string root = "auto";
  std::uint64_t seed = 0;
  int ga_population = 16;
  int ga_generations = 20;
};

struct PlanArgs {
  std::string planner = "fp";
  double step_deg = 1.0;
  int max_flips = 64;
  long node_budget = 4000;
};

struct GridArgs {
  double cell = 5.0;
  double thickness = 3.0;
};

void add_unfold_flags(CLI::App* app, UnfoldArgs& a) {
  app->add_option("--method", a.method, "unfolding method")->check(CLI::IsMember({"nb", "ga", "blooming"}));
  app->add_option("--root", a.root, "stationary face id or 'auto'");
  app->add_option("--seed", a.seed, "random seed");
  app->add_option("--ga-population", a.ga_population)->check(CLI::PositiveNumber);
  app->add_option("--ga-generations", a.ga_generations)->check(CLI::NonNegativeNumber);
}

void add_plan_flags(CLI::App* app, PlanArgs& a) {
  app->add_option("--planner", a.planner, "motion planner")->check(CLI::IsMember({"fp", "mp"}));
  app->add_option("--step-deg", a.step_deg, "sweep step in degrees")->check(CLI::PositiveNumber);
  app->add_option("--max-flips", a.max_flips, "flip budget")->check(CLI::NonNegativeNumber);
  app->add_option("--node-budget", a.node_budget, "FP search budget")->check(CLI::PositiveNumber);
}

void add_grid_flags(CLI::App* app, GridArgs& g) {
  app->add_option("--cell", g.cell, "substrate cell size, mm")->check(CLI::PositiveNumber);
  app->add_option("--thickness", g.thickness, "substrate thickness, mm")->check(CLI::PositiveNumber);
}

Calibration load_calib(const std::string& path) { return path.empty() ? Calibration{} : Calibration::load(path); }

int parse_root(const TriMesh& mesh, const std::string& root) {
  if (root == "auto") return choose_root(mesh);
  try {
    size_t used = 0;
    int r = std::stoi(root, &used);
    if (used != root.size()) throw std::invalid_argument(root);
    if (r < 0 || r >= mesh.face_count()) throw ParameterError("--root out of range");
    return r;
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--root", "expected 'auto' or a face id");
  }
}

CutTree unfold_tree(const TriMesh& mesh, const UnfoldArgs& a) {
  int root = parse_root(mesh, a.root);
  if (a.method == "blooming") return blooming_tree(mesh, root);
  if (a.method == "ga") {
    GaOptions o;
    o.seed = a.seed;
    o.population = a.ga_population;
    o.generations = a.ga_generations;
    return ga_unfold(mesh, root, o);
  }
  return nearly_blooming(mesh, root);
}

Net make_net(const TriMesh& mesh, const CutTree& tree, const UnfoldArgs& a) {
  Provenance p;
  p.method = a.method;
  p.seed = a.method == "ga" ? a.seed : 0;
  return layout(mesh, tree, p);
}

PlannerConfig planner_config(const PlanArgs& a) {
  PlannerConfig c;
  c.step_deg = a.step_deg;
  c.max_flips = a.max_flips;
  c.node_budget = a.node_budget;
  return c;
}

Plan make_plan(const Net& net, const PlanArgs& a) {
  if (!net.overlaps().empty())
    throw Infeasible("net has " + std::to_string(net.overlaps().size()) + " overlapping face pairs");
  return a.planner == "mp" ? plan_mp(net, planner_config(a)) : plan_fp(net, planner_config(a));
}

NetSource source_of(const std::string& mesh_path, const CutTree& tree) {
  return {mesh_path, file_sha256(mesh_path), tree.arcs()};
}

std::string report_json(const PlanReport& r, const Net& net, const Plan& plan, const Calibration& calib,
                        const Substrate& grid) {
  auto e = energy(plan, net, calib, r.clipped, grid.cell);
  nlohmann::json j = {{"report",
                       {{"completion", r.completion},
                        {"energy", r.energy},
                        {"clipped", r.clipped},
                        {"flips", r.flips},
                        {"unfold_work", r.unfold_work}}},
                      {"energy_breakdown", {{"cut", e.cut}, {"fold", e.fold}, {"flip", e.flip}}},
                      {"planner", plan.planner},
                      {"method", net.provenance().method},
                      {"heuristic", plan.heuristic || net.provenance().heuristic},
                      {"calib_sha256", calib.sha256()}};
  return j.dump(1) + "\n";
}

PlanReport checked_verify(const Net& net, const Substrate& grid, const Plan& plan, const Calibration& calib) {
  if (!net.overlaps().empty()) throw Infeasible("net overlaps");
  return verify(net, grid, plan, calib);
}

void print_report(std::ostream& out, const PlanReport& r) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "completion %.4f%%  F %d  E %.4f J  flips %d  unfold_work %.4f\n", r.completion,
                r.clipped, r.energy, r.flips, r.unfold_work);
  out << buf;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"unfold meshes into laser-formable nets, plan the folding, emit laser jobs", "foldnet"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  // unfold
  std::string mesh_path, net_path = "net.json", plan_path = "plan.json", out_path, calib_path;
  UnfoldArgs ua;
  PlanArgs pa;
  GridArgs ga;
  auto* unfold = app.add_subcommand("unfold", "cut a mesh into a net (writes net.json)");
  unfold->add_option("mesh", mesh_path, "input OBJ")->required()->check(CLI::ExistingFile);
  add_unfold_flags(unfold, ua);
  unfold->add_option("-o,--out", net_path, "output net JSON");

  // plan
  std::string in_net;
  std::string report_path;
  auto* plan = app.add_subcommand("plan", "plan the folding of a net (writes plan.json)");
  plan->add_option("net", in_net, "net JSON")->required()->check(CLI::ExistingFile);
  add_plan_flags(plan, pa);
  add_grid_flags(plan, ga);
  plan->add_option("-o,--out", plan_path, "output plan JSON");
  plan->add_option("--report", report_path, "also write the verified report JSON");
  plan->add_option("--calib", calib_path, "calibration JSON")->check(CLI::ExistingFile);

  // clip
  std::string in_plan;
  auto* clip = app.add_subcommand("clip", "compute the substrate cells to clip (rewrites plan.json with per-step cells)");
  clip->add_option("net", in_net, "net JSON")->required()->check(CLI::ExistingFile);
  clip->add_option("plan", in_plan, "plan JSON")->required()->check(CLI::ExistingFile);
  add_grid_flags(clip, ga);
  clip->add_option("-o,--out", out_path, "output plan JSON (default: overwrite input)");

  // optimize
  int iters = 500;
  std::uint64_t opt_seed = 0;
  std::string trace_path;
  auto* optimize = app.add_subcommand("optimize", "improve a net by local tree edits (writes net.json)");
  optimize->add_option("net", in_net, "net JSON")->required()->check(CLI::ExistingFile);
  optimize->add_option("--iters", iters, "annealing iterations")->check(CLI::NonNegativeNumber);
  optimize->add_option("--seed", opt_seed, "random seed");
  optimize->add_option("--trace", trace_path, "trace CSV");
  optimize->add_option("--calib", calib_path, "calibration JSON")->check(CLI::ExistingFile);
  add_plan_flags(optimize, pa);
  add_grid_flags(optimize, ga);
  optimize->add_option("-o,--out", out_path, "output net JSON (default: overwrite input)");

  // emit
  std::string mode = "interleaved";
  auto* emit_cmd = app.add_subcommand("emit", "write the laser job (.lfi)");
  emit_cmd->add_option("net", in_net, "net JSON")->required()->check(CLI::ExistingFile);
  emit_cmd->add_option("plan", in_plan, "plan JSON")->required()->check(CLI::ExistingFile);
  emit_cmd->add_option("--mode", mode)->check(CLI::IsMember({"interleaved", "all-cuts-first"}));
  emit_cmd->add_option("--calib", calib_path, "calibration JSON")->check(CLI::ExistingFile);
  add_grid_flags(emit_cmd, ga);
  std::string lfi_path = "job.lfi";
  emit_cmd->add_option("-o,--out", lfi_path, "output .lfi");

  // export
  std::string svg_path, obj_dir;
  auto* exp = app.add_subcommand("export", "export SVG and/or an OBJ fold sequence");
  exp->add_option("net", in_net, "net JSON")->required()->check(CLI::ExistingFile);
  exp->add_option("--plan", in_plan, "plan JSON (needed for --obj-seq and clipped cells)")->check(CLI::ExistingFile);
  exp->add_option("--svg", svg_path, "SVG output file");
  exp->add_option("--obj-seq", obj_dir, "directory for numbered OBJ snapshots");
  add_grid_flags(exp, ga);

  // report
  std::vector<std::string> run_dirs;
  std::string csv_path, json_path;
  auto* report = app.add_subcommand("report", "re-verify runs and tabulate their reports (CSV and JSON)");
  report->add_option("runs", run_dirs, "run directories holding net.json and plan.json")->required();
  report->add_option("--csv", csv_path, "CSV output (default: stdout)");
  report->add_option("--json", json_path, "JSON output");
  report->add_option("--calib", calib_path, "calibration JSON")->check(CLI::ExistingFile);
  add_grid_flags(report, ga);

  // pipeline
  std::string out_dir = ".";
  int pipe_iters = 0;
  auto* pipeline = app.add_subcommand("pipeline", "unfold, plan, clip, (optimize,) emit and report in one go");
  pipeline->add_option("mesh", mesh_path, "input OBJ")->required()->check(CLI::ExistingFile);
  add_unfold_flags(pipeline, ua);
  add_plan_flags(pipeline, pa);
  add_grid_flags(pipeline, ga);
  pipeline->add_option("--mode", mode)->check(CLI::IsMember({"interleaved", "all-cuts-first"}));
  pipeline->add_option("--calib", calib_path, "calibration JSON")->check(CLI::ExistingFile);
  pipeline->add_option("--optimize-iters", pipe_iters, "annealing iterations (0 skips optimization)")
      ->check(CLI::NonNegativeNumber);
  pipeline->add_option("--out-dir", out_dir, "output directory");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (unfold->parsed()) {
      TriMesh mesh = load_obj(mesh_path);
      CutTree tree = unfold_tree(mesh, ua);
      Net net = make_net(mesh, tree, ua);
      write_file(net_path, net_to_json(net, source_of(mesh_path, tree)));
      out << "net: " << net.face_count() << " faces, " << net.crease_count() << " creases, edits "
          << tree.edit_count << (tree.heuristic ? " (heuristic)" : "") << ", overlaps " << net.overlaps().size()
          << "\n";
      return net.overlaps().empty() ? kExitOk : kExitInfeasible;
    }
    if (plan->parsed()) {
      Net net = net_from_json(read_file(in_net));
      Plan p = make_plan(net, pa);
      Substrate grid = make_substrate(net, ga.cell, ga.thickness);
      clip_plan(net, p, grid);
      Calibration calib = load_calib(calib_path);
      PlanReport r = checked_verify(net, grid, p, calib);
      write_file(plan_path, plan_to_json(p, net));
      if (!report_path.empty()) write_file(report_path, report_json(r, net, p, calib, grid));
      print_report(out, r);
      return kExitOk;
    }
    if (clip->parsed()) {
      Net net = net_from_json(read_file(in_net));
      Plan p = plan_from_json(read_file(in_plan), net);
      Substrate grid = clip_plan(net, p, make_substrate(net, ga.cell, ga.thickness));
      write_file(out_path.empty() ? in_plan : out_path, plan_to_json(p, net));
      out << "F " << grid.clipped.size() << "\n";
      return kExitOk;
    }
    if (optimize->parsed()) {
      NetSource src;
      Net net = net_from_json(read_file(in_net), &src);
      if (!net.overlaps().empty()) throw Infeasible("net overlaps");
      TriMesh mesh = load_obj(src.mesh_path);
      if (file_sha256(src.mesh_path) != src.mesh_sha256) throw ParameterError("mesh file changed since unfolding");
      CutTree tree0 = CutTree::from_arcs(mesh, net.root(), src.arcs);
      OptConfig oc;
      oc.iterations = iters;
      oc.seed = opt_seed;
      oc.planner = planner_config(pa);
      oc.cell = ga.cell;
      oc.thickness = ga.thickness;
      OptResult res = optimize_net(mesh, tree0, load_calib(calib_path), oc);
      Provenance p = net.provenance();
      p.edit_count = res.tree.edit_count;
      Net best = layout(mesh, res.tree, p);
      write_file(out_path.empty() ? in_net : out_path, net_to_json(best, {src.mesh_path, src.mesh_sha256, res.tree.arcs()}));
      if (!trace_path.empty()) write_file(trace_path, trace_csv(res.trace));
      out << "before: ";
      print_report(out, res.initial);
      out << "after:  ";
      print_report(out, res.report);
      return kExitOk;
    }
    if (emit_cmd->parsed()) {
      Net net = net_from_json(read_file(in_net));
      Plan p = plan_from_json(read_file(in_plan), net);
      Calibration calib = load_calib(calib_path);
      Substrate grid = clip_plan(net, p, make_substrate(net, ga.cell, ga.thickness));
      checked_verify(net, grid, p, calib);
      LaserJob job = emit(p, net, grid, calib, mode == "interleaved" ? EmitMode::Interleaved : EmitMode::AllCutsFirst);
      write_file(lfi_path, job.to_text());
      out << "job: " << job.instructions.size() << " instructions\n";
      return kExitOk;
    }
    if (exp->parsed()) {
      if (svg_path.empty() && obj_dir.empty()) throw CLI::ValidationError("export", "give --svg and/or --obj-seq");
      Net net = net_from_json(read_file(in_net));
      std::optional<Plan> p;
      if (!in_plan.empty()) p = plan_from_json(read_file(in_plan), net);
      if (!svg_path.empty()) {
        if (p) {
          Substrate grid = clip_plan(net, *p, make_substrate(net, ga.cell, ga.thickness));
          write_file(svg_path, export_svg(net, &grid));
        } else {
          write_file(svg_path, export_svg(net));
        }
      }
      if (!obj_dir.empty()) {
        if (!p) throw CLI::ValidationError("--obj-seq", "needs --plan");
        auto seq = export_obj_sequence(net, *p);
        char name[32];
        for (size_t i = 0; i < seq.size(); ++i) {
          std::snprintf(name, sizeof name, "step_%04zu.obj", i);
          write_file(fs::path(obj_dir) / name, seq[i]);
        }
      }
      return kExitOk;
    }
    if (report->parsed()) {
      Calibration calib = load_calib(calib_path);
      nlohmann::json rows = nlohmann::json::array();
      std::string csv = "run,method,planner,completion,F,E,flips,unfold_work\n";
      PlanReport total;
      bool mismatch = false;
      for (const auto& dir : run_dirs) {
        Net net = net_from_json(read_file(fs::path(dir) / "net.json"));
        Plan p = plan_from_json(read_file(fs::path(dir) / "plan.json"), net);
        Substrate grid = make_substrate(net, ga.cell, ga.thickness);
        PlanReport r = checked_verify(net, grid, p, calib);
        fs::path stored = fs::path(dir) / "report.json";
        if (fs::exists(stored)) {
          PlanReport s = report_from_json(read_file(stored));
          if (std::abs(s.completion - r.completion) > 1e-9 || s.clipped != r.clipped ||
              std::abs(s.energy - r.energy) > 1e-9 * std::max(1.0, r.energy) || s.flips != r.flips) {
            err << dir << ": stored report disagrees with re-verification\n";
            mismatch = true;
          }
        }
        char buf[400];
        std::snprintf(buf, sizeof buf, "%s,%s,%s,%.6f,%d,%.6f,%d,%.6f\n", dir.c_str(), net.provenance().method.c_str(),
                      p.planner.c_str(), r.completion, r.clipped, r.energy, r.flips, r.unfold_work);
        csv += buf;
        rows.push_back({{"run", dir},
                        {"method", net.provenance().method},
                        {"planner", p.planner},
                        {"completion", r.completion},
                        {"clipped", r.clipped},
                        {"energy", r.energy},
                        {"flips", r.flips},
                        {"unfold_work", r.unfold_work}});
        total.completion += r.completion;
        total.clipped += r.clipped;
        total.energy += r.energy;
        total.flips += r.flips;
        total.unfold_work += r.unfold_work;
      }
      const double n = static_cast<double>(run_dirs.size());
      nlohmann::json summary = {{"runs", rows},
                                {"totals",
                                 {{"clipped", total.clipped},
                                  {"energy", total.energy},
                                  {"flips", total.flips},
                                  {"unfold_work", total.unfold_work}}},
                                {"mean_completion", total.completion / n}};
      if (csv_path.empty()) out << csv;
      else write_file(csv_path, csv);
      if (!json_path.empty()) write_file(json_path, summary.dump(1) + "\n");
      return mismatch ? kExitVerification : kExitOk;
    }
    if (pipeline->parsed()) {
      fs::path dir(out_dir);
      TriMesh mesh = load_obj(mesh_path);
      Calibration calib = load_calib(calib_path);
      CutTree tree = unfold_tree(mesh, ua);
      Net net = make_net(mesh, tree, ua);
      if (!net.overlaps().empty()) {
        write_file(dir / "net.json", net_to_json(net, source_of(mesh_path, tree)));
        throw Infeasible("net has " + std::to_string(net.overlaps().size()) + " overlapping face pairs");
      }
      if (pipe_iters > 0) {
        OptConfig oc;
        oc.iterations = pipe_iters;
        oc.seed = ua.seed;
        oc.planner = planner_config(pa);
        oc.cell = ga.cell;
        oc.thickness = ga.thickness;
        OptResult res = optimize_net(mesh, tree, calib, oc);
        tree = res.tree;
        Provenance p = net.provenance();
        p.edit_count = tree.edit_count;
        net = layout(mesh, tree, p);
        write_file(dir / "trace.csv", trace_csv(res.trace));
      }
      Plan p = make_plan(net, pa);
      Substrate grid = clip_plan(net, p, make_substrate(net, ga.cell, ga.thickness));
      PlanReport r = checked_verify(net, grid, p, calib);
      LaserJob job = emit(p, net, grid, calib, mode == "interleaved" ? EmitMode::Interleaved : EmitMode::AllCutsFirst);
      write_file(dir / "net.json", net_to_json(net, source_of(mesh_path, tree)));
      write_file(dir / "plan.json", plan_to_json(p, net));
      write_file(dir / "job.lfi", job.to_text());
      write_file(dir / "report.json", report_json(r, net, p, calib, grid));
      write_file(dir / "net.svg", export_svg(net, &grid));
      RunManifest m;
      m.mesh_path = mesh_path;
      m.mesh_sha256 = file_sha256(mesh_path);
      m.method = ua.method;
      m.root = ua.root;
      m.planner = pa.planner;
      m.step_deg = pa.step_deg;
      m.max_flips = pa.max_flips;
      m.seed = ua.seed;
      m.calib_sha256 = calib.sha256();
      m.outputs = {"net.json", "plan.json", "job.lfi", "report.json", "net.svg"};
      if (pipe_iters > 0) m.outputs.push_back("trace.csv");
      write_file(dir / "manifest.json", m.to_json());
      print_report(out, r);
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const VerificationError& e) {
    err << "verification failed at step " << e.step() << " (" << e.predicate() << "): " << e.what() << "\n";
    return kExitVerification;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace foldnet
