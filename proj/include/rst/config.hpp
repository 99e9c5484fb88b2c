#pragma once

// Run configuration: a JSON document with nested sections. Unknown keys are
// rejected; every omitted key is resolved to its default at parse time, so a
// parsed config serializes to a complete, self-describing document.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rst/dp.hpp"
#include "rst/fishery.hpp"
#include "rst/mesh.hpp"
#include "rst/tabular.hpp"

namespace rst::cli {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GridSpec {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::size_t> nodes;
};

struct ControlSpec {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t points = 0;
};

struct RayMeshSpec {
  double d = 0.0;
  std::size_t count = 0;
  std::vector<double> anchors;
};

struct FisherySpec {
  double r_a = 0.39;
  double r_b = 2.0;
  double K_a = 90.0;
  double K_b = 50.0;
  double u_max = 40.0;
  double m_big = 1e6;
  std::vector<std::string> scenarios{"a", "b"};

  fishery::FisheryParams params() const;
};

struct StrongSpec {
  std::optional<std::vector<double>> c0;
  /// "all" or a comma-separated 1-based permutation such as "2,1".
  std::string permutation = "all";
};

struct RunConfig {
  std::string model;
  std::size_t horizon = 0;
  std::vector<double> initial_state;

  FisherySpec fishery;
  std::optional<tabular::TabularTables> tabular;

  GridSpec grid;
  ControlSpec controls;
  RayMeshSpec ray_mesh;

  double front_tol = 0.0;
  double membership_tol = 0.0;
  InterpMode interp = InterpMode::multilinear;
  bool full_grid = false;
  bool oracle = false;
  std::uint64_t oracle_budget = 10'000'000;
  double neg_inf = dp::kDefaultNegInf;

  std::optional<std::vector<double>> threshold;
  StrongSpec strong;

  std::string output_dir = "out";
  std::size_t jobs = 0;  // 0: OpenMP default
};

inline constexpr std::string_view kFisheryModel = "fishery-beverton-holt";
inline constexpr std::string_view kTabularModel = "tabular";

/// Throws ConfigError naming the offending key path (e.g. "ray_mesh.d").
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);
/// Pretty JSON (indent >= 0) or one line (indent < 0).
std::string serialize_config(const RunConfig& cfg, int indent = 2);

/// Checks cross-field invariants; parse_config already calls it.
void validate(const RunConfig& cfg);

/// Everything a command needs, built from a validated config.
struct Setup {
  std::shared_ptr<const SystemSpec> system;
  std::unique_ptr<dp::Problem> problem;
  ThresholdRayMesh mesh;
};

Setup build_setup(const RunConfig& cfg);
std::shared_ptr<const SystemSpec> build_system(const RunConfig& cfg);
StateGrid build_grid(const RunConfig& cfg);
ControlMesh build_controls(const RunConfig& cfg);

/// strong.permutation resolved to 0-based component orders.
std::vector<std::vector<std::size_t>> permutations(const RunConfig& cfg);

}  // namespace rst::cli
