#include "foldnet/fabricate.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include "json.hpp"
#include <sstream>

#include "foldnet/errors.hpp"

namespace foldnet {

using nlohmann::json;

void Calibration::validate() const {
  for (double v : {fold_power, fold_speed, passes_per_degree, cut_power, cut_speed, thickness, kerf})
    if (!(v > 0.0)) throw ParameterError("calibration values must be strictly positive");
  if (!(flip_cost >= 0.0)) throw ParameterError("flip_cost must be non-negative");
}

std::string Calibration::to_json() const {
  json j = {{"fold_power", fold_power}, {"fold_speed", fold_speed}, {"passes_per_degree", passes_per_degree},
            {"cut_power", cut_power},   {"cut_speed", cut_speed},   {"flip_cost", flip_cost},
            {"thickness", thickness},   {"kerf", kerf}};
  return j.dump();
}

Calibration Calibration::from_json(const std::string& text) {
  json j = json::parse(text);
  Calibration c;
  c.fold_power = j.value("fold_power", c.fold_power);
  c.fold_speed = j.value("fold_speed", c.fold_speed);
  c.passes_per_degree = j.value("passes_per_degree", c.passes_per_degree);
  c.cut_power = j.value("cut_power", c.cut_power);
  c.cut_speed = j.value("cut_speed", c.cut_speed);
  c.flip_cost = j.value("flip_cost", c.flip_cost);
  c.thickness = j.value("thickness", c.thickness);
  c.kerf = j.value("kerf", c.kerf);
  c.validate();
  return c;
}

Calibration Calibration::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open calibration file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string Calibration::sha256() const { return sha256_hex(to_json()); }

int fold_passes(double delta_deg, double passes_per_degree) {
  return static_cast<int>(std::ceil(passes_per_degree * std::abs(delta_deg) - 1e-9));
}

double fold_energy(const Action& a, const Net& net, const Calibration& calib) {
  if (!a.is_fold()) return 0.0;
  double deg = (a.to - a.from) * net.creases()[a.crease].target * 180.0 / M_PI;
  int passes = fold_passes(deg, calib.passes_per_degree);
  return calib.fold_power * net.hinge_length(a.crease) * passes / calib.fold_speed;
}

EnergyBreakdown energy(const Plan& plan, const Net& net, const Calibration& calib, int clipped_cells,
                       double cell_size) {
  EnergyBreakdown e;
  e.cut = calib.cut_power * (net.cut_length() + clipped_cells * 4.0 * cell_size) / calib.cut_speed;
  for (const auto& a : plan.actions) {
    if (a.is_fold()) e.fold += fold_energy(a, net, calib);
    else e.flip += calib.flip_cost;
  }
  return e;
}

namespace {

std::string fmt4(double v) {
  if (std::abs(v) < 5e-5) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

Vec2 world_xy(const FoldedState& s, int face, const Vec2& p) {
  Vec3 w = s.pose[face].apply(Vec3(p.x(), p.y(), 0.0));
  return {w.x(), w.y()};
}

LaserInstruction cut_polyline(std::vector<Vec2> pts) {
  LaserInstruction ins;
  ins.kind = LaserInstruction::Kind::Cut;
  ins.points = std::move(pts);
  return ins;
}

// Cut copies that coincide in the flat net are cut once.
std::vector<int> unique_cuts(const Net& net) {
  std::map<std::array<long long, 4>, int> seen;
  std::vector<int> keep;
  auto q = [](double v) { return std::llround(v * 1e6); };
  for (int i = 0; i < static_cast<int>(net.cuts().size()); ++i) {
    const auto& s = net.cuts()[i].segment;
    std::array<long long, 4> k1{q(s.a.x()), q(s.a.y()), q(s.b.x()), q(s.b.y())};
    std::array<long long, 4> k2{q(s.b.x()), q(s.b.y()), q(s.a.x()), q(s.a.y())};
    auto key = std::min(k1, k2);
    if (seen.emplace(key, i).second) keep.push_back(i);
  }
  return keep;
}

}  // namespace

LaserJob emit(const Plan& plan, const Net& net, const Substrate& substrate, const Calibration& calib, EmitMode mode) {
  calib.validate();
  try {
    verify(net, substrate, plan, calib);
  } catch (const VerificationError& e) {
    throw RefusedError(std::string("plan failed verification: ") + e.what());
  }
  LaserJob job;
  job.calib_hash = calib.sha256();
  for (int id : substrate.clipped) {
    auto sq = substrate.cell_square(id);
    sq.push_back(sq.front());
    job.instructions.push_back(cut_polyline(std::move(sq)));
  }
  const auto cuts = unique_cuts(net);
  std::vector<char> emitted(net.cuts().size(), 0);
  Configuration cfg = Configuration::flat(net);
  auto emit_cuts_of = [&](const std::vector<int>& faces, const FoldedState& s) {
    std::vector<char> in(net.face_count(), 0);
    for (int f : faces) in[f] = 1;
    for (int i : cuts) {
      const auto& c = net.cuts()[i];
      if (emitted[i] || !in[c.face]) continue;
      emitted[i] = 1;
      job.instructions.push_back(cut_polyline({world_xy(s, c.face, c.segment.a), world_xy(s, c.face, c.segment.b)}));
    }
  };
  std::vector<int> all_faces(net.face_count());
  for (int f = 0; f < net.face_count(); ++f) all_faces[f] = f;
  if (mode == EmitMode::AllCutsFirst) emit_cuts_of(all_faces, fold_state(net, cfg));

  std::vector<char> started(net.crease_count(), 0);
  for (const auto& a : plan.actions) {
    if (!a.is_fold()) {
      job.instructions.push_back({LaserInstruction::Kind::Flip, {}, -1, 0.0, 0, 0.0, 0.0});
      cfg.flipped = !cfg.flipped;
      continue;
    }
    FoldedState s = fold_state(net, cfg);
    if (!started[a.crease]) {
      started[a.crease] = 1;
      emit_cuts_of(net.moving_faces(a.crease), s);
    }
    const auto& c = net.creases()[a.crease];
    LaserInstruction ins;
    ins.kind = LaserInstruction::Kind::Fold;
    ins.crease_id = c.id;
    ins.points = {world_xy(s, c.parent_face, c.hinge.a), world_xy(s, c.parent_face, c.hinge.b)};
    ins.angle_deg = (a.to - a.from) * c.target * 180.0 / M_PI;
    ins.passes = fold_passes(ins.angle_deg, calib.passes_per_degree);
    ins.power = calib.fold_power;
    ins.speed = calib.fold_speed;
    job.instructions.push_back(std::move(ins));
    cfg.q[a.crease] = a.to;
  }
  emit_cuts_of(all_faces, fold_state(net, cfg));
  return job;
}

std::string LaserJob::to_text() const {
  std::string out = "LFI 1\nUNITS MM\nCALIB " + calib_hash + "\n";
  for (const auto& ins : instructions) {
    switch (ins.kind) {
      case LaserInstruction::Kind::Cut:
        out += "CUT";
        for (const auto& p : ins.points) out += " " + fmt4(p.x()) + " " + fmt4(p.y());
        out += "\n";
        break;
      case LaserInstruction::Kind::Fold:
        out += "FOLD " + std::to_string(ins.crease_id);
        for (const auto& p : ins.points) out += " " + fmt4(p.x()) + " " + fmt4(p.y());
        out += " ANGLE " + fmt4(ins.angle_deg) + " PASSES " + std::to_string(ins.passes) + " POWER " +
               fmt4(ins.power) + " SPEED " + fmt4(ins.speed) + "\n";
        break;
      case LaserInstruction::Kind::Flip:
        out += "FLIP\n";
        break;
    }
  }
  out += "END\n";
  return out;
}

std::string export_svg(const Net& net, const Substrate* substrate) {
  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity()), hi = -lo;
  for (const auto& f : net.faces())
    for (const auto& p : f.loop) {
      lo = lo.cwiseMin(p);
      hi = hi.cwiseMax(p);
    }
  if (substrate) {
    lo = lo.cwiseMin(substrate->origin);
    hi = hi.cwiseMax(substrate->origin + Vec2(substrate->cols, substrate->rows) * substrate->cell);
  }
  const double pad = 2.0;
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt4(lo.x() - pad) << " " << fmt4(lo.y() - pad)
    << " " << fmt4(hi.x() - lo.x() + 2 * pad) << " " << fmt4(hi.y() - lo.y() + 2 * pad) << "\" width=\""
    << fmt4(hi.x() - lo.x() + 2 * pad) << "mm\" height=\"" << fmt4(hi.y() - lo.y() + 2 * pad) << "mm\">\n";
  auto line = [&](const Segment2& s) {
    o << "    <line x1=\"" << fmt4(s.a.x()) << "\" y1=\"" << fmt4(s.a.y()) << "\" x2=\"" << fmt4(s.b.x())
      << "\" y2=\"" << fmt4(s.b.y()) << "\"/>\n";
  };
  if (substrate && !substrate->clipped.empty()) {
    o << "  <g id=\"clipped\" fill=\"#f4c7c3\" stroke=\"none\">\n";
    for (int id : substrate->clipped) {
      auto sq = substrate->cell_square(id);
      o << "    <rect x=\"" << fmt4(sq[0].x()) << "\" y=\"" << fmt4(sq[0].y()) << "\" width=\""
        << fmt4(substrate->cell) << "\" height=\"" << fmt4(substrate->cell) << "\"/>\n";
    }
    o << "  </g>\n";
  }
  o << "  <g id=\"faces\" fill=\"#eeeeee\" stroke=\"none\">\n";
  for (const auto& f : net.faces()) {
    o << "    <polygon points=\"";
    for (size_t i = 0; i < f.loop.size(); ++i) o << (i ? " " : "") << fmt4(f.loop[i].x()) << "," << fmt4(f.loop[i].y());
    o << "\"/>\n";
  }
  o << "  </g>\n";
  o << "  <g id=\"cuts\" stroke=\"#000000\" stroke-width=\"0.2\" fill=\"none\">\n";
  for (int i : unique_cuts(net)) line(net.cuts()[i].segment);
  o << "  </g>\n";
  o << "  <g id=\"valley\" stroke=\"#1f5fbf\" stroke-width=\"0.2\" stroke-dasharray=\"2 1\">\n";
  for (const auto& c : net.creases())
    if (!c.trivial && c.target > 0.0) line(c.hinge);
  o << "  </g>\n";
  o << "  <g id=\"mountain\" stroke=\"#bf1f1f\" stroke-width=\"0.2\" stroke-dasharray=\"2 1 0.5 1\">\n";
  for (const auto& c : net.creases())
    if (!c.trivial && c.target < 0.0) line(c.hinge);
  o << "  </g>\n";
  o << "</svg>\n";
  return o.str();
}

std::string export_obj(const Net& net, const FoldedState& state) {
  std::ostringstream o;
  char buf[128];
  for (const auto& poly : state.polygons)
    for (const auto& p : poly) {
      std::snprintf(buf, sizeof buf, "v %.9f %.9f %.9f\n", p.x(), p.y(), p.z());
      o << buf;
    }
  int base = 1;
  for (int f = 0; f < net.face_count(); ++f) {
    o << "f";
    for (size_t i = 0; i < state.polygons[f].size(); ++i) o << " " << base + static_cast<int>(i);
    o << "\n";
    base += static_cast<int>(state.polygons[f].size());
  }
  return o.str();
}

std::vector<std::string> export_obj_sequence(const Net& net, const Plan& plan) {
  std::vector<std::string> out;
  out.push_back(export_obj(net, fold_state(net, Configuration::flat(net))));
  for (const auto& snap : plan.snapshots) out.push_back(export_obj(net, fold_state(net, snap)));
  return out;
}

}  // namespace foldnet
