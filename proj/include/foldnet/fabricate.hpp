#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "foldnet/geometry.hpp"
#include "foldnet/net.hpp"
#include "foldnet/planner.hpp"
#include "foldnet/substrate.hpp"

namespace foldnet {

// Laser process constants. Defaults stand in for a measured calibration
// table; every value can be overridden from a JSON file.
struct Calibration {
  double fold_power = 40.0;        // W
  double fold_speed = 50.0;        // mm/s
  double passes_per_degree = 0.5;  // 1/deg
  double cut_power = 40.0;         // W
  double cut_speed = 10.0;         // mm/s
  double flip_cost = 0.0;          // J per flip
  double thickness = 1.0;          // mm
  double kerf = 0.1;               // mm

  void validate() const;
  std::string to_json() const;  // canonical form, hashed into job headers
  static Calibration from_json(const std::string& text);
  static Calibration load(const std::filesystem::path& path);
  std::string sha256() const;
};

std::string sha256_hex(std::string_view bytes);

int fold_passes(double delta_deg, double passes_per_degree);

struct EnergyBreakdown {
  double cut = 0.0;
  double fold = 0.0;
  double flip = 0.0;
  double total() const { return cut + fold + flip; }
};

// E = E_cut + E_fold + flips * flip_cost. Cutting covers the net outline
// and the perimeter of every clipped substrate cell; each fold (or
// re-opening) scans its hinge ceil(passes_per_degree * |delta deg|) times.
EnergyBreakdown energy(const Plan& plan, const Net& net, const Calibration& calib, int clipped_cells = 0,
                       double cell_size = 0.0);
double fold_energy(const Action& a, const Net& net, const Calibration& calib);

enum class EmitMode { Interleaved, AllCutsFirst };

struct LaserInstruction {
  enum class Kind { Cut, Fold, Flip };
  Kind kind = Kind::Cut;
  std::vector<Vec2> points;  // CUT polyline or FOLD hinge endpoints
  int crease_id = -1;
  double angle_deg = 0.0;
  int passes = 0;
  double power = 0.0;
  double speed = 0.0;
};

struct LaserJob {
  std::string calib_hash;
  std::vector<LaserInstruction> instructions;
  std::string to_text() const;  // .lfi
};

// Refuses (RefusedError) plans that do not pass verify().
LaserJob emit(const Plan& plan, const Net& net, const Substrate& substrate, const Calibration& calib,
              EmitMode mode = EmitMode::Interleaved);

std::string export_svg(const Net& net, const Substrate* substrate = nullptr);
std::string export_obj(const Net& net, const FoldedState& state);
// Flat state first, then one snapshot per plan action.
std::vector<std::string> export_obj_sequence(const Net& net, const Plan& plan);

}  // namespace foldnet
