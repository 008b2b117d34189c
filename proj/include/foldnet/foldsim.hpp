#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "foldnet/geometry.hpp"
#include "foldnet/net.hpp"
#include "foldnet/substrate.hpp"

namespace foldnet {

inline constexpr double kContactTol = 1e-6;   // mm
inline constexpr double kSlabEps = 1e-9;      // mm below z = 0 before a face counts as inside the slab
inline constexpr int kVisibilitySamples = 16;
inline constexpr double kVisibilityInset = 1e-3;  // mm

// Fold fraction per crease (indexed like Net::creases()) and whether the
// whole workpiece has been turned over by the rotary.
struct Configuration {
  std::vector<double> q;
  bool flipped = false;

  static Configuration flat(const Net& net) { return {std::vector<double>(net.crease_count(), 0.0), false}; }
  static Configuration folded(const Net& net) { return {std::vector<double>(net.crease_count(), 1.0), false}; }
};

struct FoldedState {
  std::vector<Rigid> pose;  // net frame -> world, per face
  std::vector<std::vector<Vec3>> polygons;
  std::vector<Aabb3> boxes;
  bool flipped = false;
};

// Turn-over in place: half turn about the x-parallel line through the
// root face vertex centroid.
Rigid flip_motion(const Net& net);

FoldedState fold_state(const Net& net, const Configuration& config);

// Non-hinged face pairs that interpenetrate.
std::vector<FacePair> self_collides(const Net& net, const FoldedState& state);
// Same, restricted to pairs with one face in `moving` and one outside.
std::vector<FacePair> self_collides_between(const Net& net, const FoldedState& state, std::span<const int> moving);

std::set<int> substrate_penetrations(const FoldedState& state, const Substrate& substrate);

// Orthographic laser from +z: every sample on the hinge must see the sky.
// Faces lying flat on the hinge (within kContactTol) count as blocking.
bool crease_visible(const Net& net, const FoldedState& state, int crease);

// +1 when a positive rotation of crease k raises its child toward the
// laser in `state`, -1 when it lowers it, 0 when the hinge is edge-on.
int laser_side(const Net& net, const FoldedState& state, int crease);

enum class Predicate { None, SelfCollision, Occlusion, Substrate, Orientation };
std::string to_string(Predicate p);

struct SweepOptions {
  double step_deg = 1.0;
  bool strict_substrate = false;  // penetrations are violations instead of clip cells
  bool collect_cells = true;
};

struct SweepResult {
  Predicate violation = Predicate::None;
  double violation_fraction = 0.0;
  double last_clear = 0.0;  // fraction reached before the first violation
  std::vector<FacePair> pairs;
  std::set<int> cells;
  bool clear() const { return violation == Predicate::None; }
};

// Fold crease k from config.q[k] to `to`, checking every step of at most
// step_deg of crease angle, endpoints included. `substrate` may be null.
SweepResult sweep_fold(const Net& net, const Configuration& from, int crease, double to, const Substrate* substrate,
                       const SweepOptions& opts = {});
// Turn the workpiece over. Visibility is not checked.
SweepResult sweep_flip(const Net& net, const Configuration& from, const Substrate* substrate,
                       const SweepOptions& opts = {});

}  // namespace foldnet
