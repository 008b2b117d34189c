#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "foldnet/fabricate.hpp"
#include "foldnet/net.hpp"
#include "foldnet/planner.hpp"

namespace foldnet {

inline constexpr const char* kToolVersion = "foldnet 1.0.0";

// Where a net came from, so later stages can reload the mesh and tree.
struct NetSource {
  std::string mesh_path;
  std::string mesh_sha256;
  std::vector<int> arcs;  // sorted crease edge ids
};

std::string net_to_json(const Net& net, const NetSource& source);
Net net_from_json(const std::string& text, NetSource* source = nullptr);

std::string plan_to_json(const Plan& plan, const Net& net);
Plan plan_from_json(const std::string& text, const Net& net);

std::string report_to_json(const PlanReport& report);
PlanReport report_from_json(const std::string& text);

struct RunManifest {
  std::string mesh_path;
  std::string mesh_sha256;
  std::string method;
  std::string root = "auto";
  std::string planner;
  double step_deg = 1.0;
  int max_flips = 64;
  std::uint64_t seed = 0;
  std::string calib_sha256;
  std::string tool_version = kToolVersion;
  std::vector<std::string> outputs;

  std::string to_json() const;
  static RunManifest from_json(const std::string& text);
};

std::string read_file(const std::filesystem::path& path);
// Writes atomically enough for a CLI: truncate then write.
void write_file(const std::filesystem::path& path, const std::string& text);
std::string file_sha256(const std::filesystem::path& path);

}  // namespace foldnet
