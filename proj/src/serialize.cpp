#include "foldnet/serialize.hpp"

#include <fstream>
#include <sstream>

#include "foldnet/errors.hpp"
#include "json.hpp"

namespace foldnet {

using nlohmann::json;

namespace {

json point(const Vec2& p) { return json::array({p.x(), p.y()}); }
Vec2 point(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }
json segment(const Segment2& s) { return json::array({point(s.a), point(s.b)}); }
Segment2 segment(const json& j) { return {point(j.at(0)), point(j.at(1))}; }

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

}  // namespace

std::string net_to_json(const Net& net, const NetSource& source) {
  json j;
  j["format"] = "foldnet-net";
  j["version"] = 1;
  j["mesh"] = {{"path", source.mesh_path}, {"sha256", source.mesh_sha256}};
  j["root"] = net.root();
  j["arcs"] = source.arcs;
  const auto& p = net.provenance();
  j["provenance"] = {{"method", p.method}, {"seed", p.seed}, {"edit_count", p.edit_count}, {"heuristic", p.heuristic}};
  json faces = json::array();
  for (const auto& f : net.faces()) {
    json loop = json::array();
    for (const auto& v : f.loop) loop.push_back(point(v));
    faces.push_back(loop);
  }
  j["faces"] = faces;
  json creases = json::array();
  for (const auto& c : net.creases())
    creases.push_back({{"id", c.id},
                       {"parent_face", c.parent_face},
                       {"child_face", c.child_face},
                       {"hinge", segment(c.hinge)},
                       {"target", c.target},
                       {"trivial", c.trivial},
                       {"depth", c.depth}});
  j["creases"] = creases;
  json cuts = json::array();
  for (const auto& c : net.cuts()) cuts.push_back({{"face", c.face}, {"segment", segment(c.segment)}});
  j["cuts"] = cuts;
  json ov = json::array();
  for (const auto& [a, b] : net.overlaps()) ov.push_back(json::array({a, b}));
  j["overlaps"] = ov;
  return j.dump(1) + "\n";
}

Net net_from_json(const std::string& text, NetSource* source) {
  json j = parse(text, "net");
  try {
    if (j.value("format", "") != "foldnet-net") throw ParameterError("not a net file");
    std::vector<NetFace> faces;
    for (const auto& loop : j.at("faces")) {
      NetFace f;
      for (const auto& v : loop) f.loop.push_back(point(v));
      faces.push_back(std::move(f));
    }
    std::vector<Crease> creases;
    for (const auto& c : j.at("creases")) {
      Crease k;
      k.id = c.at("id");
      k.parent_face = c.at("parent_face");
      k.child_face = c.at("child_face");
      k.hinge = segment(c.at("hinge"));
      k.target = c.at("target");
      k.trivial = c.at("trivial");
      creases.push_back(k);
    }
    std::vector<Cut> cuts;
    for (const auto& c : j.at("cuts")) cuts.push_back({segment(c.at("segment")), c.at("face").get<int>()});
    Provenance p;
    const auto& pj = j.at("provenance");
    p.method = pj.at("method");
    p.seed = pj.at("seed");
    p.edit_count = pj.at("edit_count");
    p.heuristic = pj.at("heuristic");
    Net net(j.at("root"), std::move(faces), std::move(creases), std::move(cuts), p);
    net.set_overlaps(detect_overlaps(net));
    if (source) {
      source->mesh_path = j.at("mesh").at("path");
      source->mesh_sha256 = j.at("mesh").at("sha256");
      source->arcs = j.at("arcs").get<std::vector<int>>();
    }
    return net;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed net JSON: ") + e.what());
  }
}

std::string plan_to_json(const Plan& plan, const Net& net) {
  json j;
  j["format"] = "foldnet-plan";
  j["version"] = 1;
  j["planner"] = plan.planner;
  j["step_deg"] = plan.step_deg;
  j["heuristic"] = plan.heuristic;
  j["fully_folded"] = plan.fully_folded;
  json actions = json::array();
  for (size_t i = 0; i < plan.actions.size(); ++i) {
    const auto& a = plan.actions[i];
    json aj;
    if (a.is_fold())
      aj = {{"kind", "fold"}, {"crease", a.crease}, {"crease_id", net.creases()[a.crease].id}, {"from", a.from}, {"to", a.to}};
    else
      aj = {{"kind", "flip"}};
    if (i < plan.clipped.size()) aj["clipped"] = plan.clipped[i];
    actions.push_back(aj);
  }
  j["actions"] = actions;
  j["final"] = {{"q", plan.final_config.q}, {"flipped", plan.final_config.flipped}};
  return j.dump(1) + "\n";
}

Plan plan_from_json(const std::string& text, const Net& net) {
  json j = parse(text, "plan");
  try {
    if (j.value("format", "") != "foldnet-plan") throw ParameterError("not a plan file");
    Plan plan;
    plan.planner = j.at("planner");
    plan.step_deg = j.at("step_deg");
    plan.heuristic = j.at("heuristic");
    Configuration cfg = Configuration::flat(net);
    plan.final_config = cfg;
    bool has_cells = true;
    std::vector<std::vector<int>> cells;
    for (const auto& aj : j.at("actions")) {
      Action a;
      if (aj.at("kind") == "flip") {
        a = Action::flip();
        cfg.flipped = !cfg.flipped;
      } else {
        a = Action::fold(aj.at("crease"), aj.at("from"), aj.at("to"));
        if (a.crease < 0 || a.crease >= net.crease_count() || net.creases()[a.crease].id != aj.at("crease_id").get<int>())
          throw ParameterError("plan does not match the net");
        cfg.q[a.crease] = a.to;
      }
      if (aj.contains("clipped")) cells.push_back(aj.at("clipped").get<std::vector<int>>());
      else has_cells = false;
      plan.append(a, cfg);
    }
    if (has_cells) plan.clipped = std::move(cells);
    plan.fully_folded = j.at("fully_folded");
    return plan;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed plan JSON: ") + e.what());
  }
}

std::string report_to_json(const PlanReport& r) {
  json j = {{"completion", r.completion}, {"energy", r.energy}, {"clipped", r.clipped}, {"flips", r.flips},
            {"unfold_work", r.unfold_work}};
  return j.dump(1) + "\n";
}

PlanReport report_from_json(const std::string& text) {
  json j = parse(text, "report");
  try {
    const json& r = j.contains("report") ? j.at("report") : j;
    PlanReport out;
    out.completion = r.at("completion");
    out.energy = r.at("energy");
    out.clipped = r.at("clipped");
    out.flips = r.at("flips");
    out.unfold_work = r.at("unfold_work");
    return out;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed report JSON: ") + e.what());
  }
}

std::string RunManifest::to_json() const {
  json j = {{"mesh", {{"path", mesh_path}, {"sha256", mesh_sha256}}},
            {"method", method},
            {"root", root},
            {"planner", planner},
            {"step_deg", step_deg},
            {"max_flips", max_flips},
            {"seed", seed},
            {"calib_sha256", calib_sha256},
            {"tool_version", tool_version},
            {"outputs", outputs}};
  return j.dump(1) + "\n";
}

RunManifest RunManifest::from_json(const std::string& text) {
  json j = parse(text, "manifest");
  try {
    RunManifest m;
    m.mesh_path = j.at("mesh").at("path");
    m.mesh_sha256 = j.at("mesh").at("sha256");
    m.method = j.at("method");
    m.root = j.at("root");
    m.planner = j.at("planner");
    m.step_deg = j.at("step_deg");
    m.max_flips = j.at("max_flips");
    m.seed = j.at("seed");
    m.calib_sha256 = j.at("calib_sha256");
    m.tool_version = j.at("tool_version");
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed manifest JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParameterError("cannot write " + path.string());
  out << text;
}

std::string file_sha256(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

}  // namespace foldnet
