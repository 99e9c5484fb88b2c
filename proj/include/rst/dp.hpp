#pragma once

// Backward maximin dynamic programming on a state grid:
//
//   V_{N+1}(x) = terminal(x)
//   V_n(x)     = max_u min{ min_w V_{n+1}(F_n(x, u, w)), stage_n(x, u) }
//
// With stage = Phi^c and terminal = Theta^c, V_0(xi) is the robust value
// W(xi, c) and c is sustainable from xi iff W(xi, c) >= 0.

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "rst/mesh.hpp"
#include "rst/model.hpp"

namespace rst::dp {

inline constexpr double kDefaultNegInf = -1e9;

/// Phi^c_k(x, u) = min_i (g^k_i(x, u) - c_i)
double phi(const SystemSpec& sys, std::size_t k, std::span<const double> x,
           std::span<const double> u, const ThresholdVector& c);
/// Theta^c(x) = min_i (theta_i(x) - c_i)
double theta_c(const SystemSpec& sys, std::span<const double> x, const ThresholdVector& c);

/// Stage/terminal reward pair fed to the recursion.
class Objective {
 public:
  enum class Kind : std::uint8_t {
    level_set,    // Phi^c / Theta^c
    constrained,  // g_i masked to the sentinel wherever g < c (resp. theta < c)
    component,    // raw g_j / theta_j, used for policy evaluation
  };

  static Objective level_set(ThresholdVector c);
  static Objective constrained(ThresholdVector c, std::size_t component,
                               double neg_inf = kDefaultNegInf);
  static Objective component(std::size_t j);

  Kind kind() const noexcept { return kind_; }
  const ThresholdVector& threshold() const noexcept { return c_; }
  std::size_t index() const noexcept { return index_; }
  std::optional<double> sentinel() const noexcept {
    return kind_ == Kind::constrained ? std::optional<double>(neg_inf_) : std::nullopt;
  }

  double stage_reward(std::span<const double> g) const;
  double terminal_reward(std::span<const double> theta) const;

 private:
  Objective(Kind kind, ThresholdVector c, std::size_t index, double neg_inf)
      : kind_(kind), c_(std::move(c)), index_(index), neg_inf_(neg_inf) {}

  Kind kind_;
  ThresholdVector c_;
  std::size_t index_;
  double neg_inf_;
};

/// Maximizing control index per stage 0..N and node; -1 off the reachable sets.
struct FeedbackPolicy {
  std::vector<std::vector<std::int32_t>> control_index;

  std::int32_t at(std::size_t stage, std::size_t node) const {
    return control_index.at(stage).at(node);
  }
};

/// Everything the recursion needs that does not depend on the threshold.
/// Immutable once built; share it read-only across workers.
class Problem {
 public:
  struct Options {
    InterpMode interp = InterpMode::multilinear;
    bool full_grid = false;
  };

  Problem(std::shared_ptr<const SystemSpec> sys, StateGrid grid, ControlMesh controls,
          State initial_state, Options options);
  Problem(std::shared_ptr<const SystemSpec> sys, StateGrid grid, ControlMesh controls,
          State initial_state)
      : Problem(std::move(sys), std::move(grid), std::move(controls), std::move(initial_state),
                Options{}) {}

  const SystemSpec& system() const noexcept { return *sys_; }
  std::shared_ptr<const SystemSpec> system_ptr() const noexcept { return sys_; }
  const StateGrid& grid() const noexcept { return grid_; }
  const ControlMesh& controls() const noexcept { return controls_; }
  const State& initial_state() const noexcept { return xi_; }
  InterpMode interp() const noexcept { return options_.interp; }
  const Options& options() const noexcept { return options_; }
  const ReachableSets& reach() const noexcept { return reach_; }

  /// Same grids and options, different initial state.
  Problem with_initial_state(State xi) const;
  /// Same grids and options, different system (e.g. constant scenario).
  Problem with_system(std::shared_ptr<const SystemSpec> sys) const;

 private:
  std::shared_ptr<const SystemSpec> sys_;
  StateGrid grid_;
  ControlMesh controls_;
  State xi_;
  Options options_;
  ReachableSets reach_;
};

struct SolveOptions {
  bool keep_tables = false;
  bool keep_policy = false;
  /// When set, the max over u is replaced by this policy's control
  /// (policy evaluation instead of optimization).
  const FeedbackPolicy* fixed_policy = nullptr;
};

struct Solution {
  double root_value = std::numeric_limits<double>::quiet_NaN();  // V_0(xi)
  std::vector<ValueTable> tables;  // stage 0..N+1 when keep_tables
  FeedbackPolicy policy;           // when keep_policy
};

/// Batched, OpenMP-parallel recursion: one pass over stages, thresholds
/// processed together so transitions are computed once per (node, u, w).
/// Results are bitwise identical to reference::solve for any thread count.
std::vector<Solution> solve(const Problem& problem, std::span<const Objective> objectives,
                            const SolveOptions& options = {});
Solution solve(const Problem& problem, const Objective& objective,
               const SolveOptions& options = {});

/// Value tables V^c_0..V^c_{N+1} and the argmax policy for a level-set objective.
Solution backward_recursion(const Problem& problem, const ThresholdVector& c);

/// W(xi, c) = interpolate(V^c_0, xi).
double robust_value(const Problem& problem, std::span<const ValueTable> tables);
double robust_value(const Problem& problem, const ThresholdVector& c);
/// W(xi, c) for many thresholds in one batched pass.
std::vector<double> robust_values(const Problem& problem, std::span<const ThresholdVector> cs);

/// W(xi, c) >= -tol.
bool membership(const Problem& problem, const ThresholdVector& c, double tol = 0.0);

/// CSV (stage, node, x_1..x_n, value) of every populated entry.
void write_value_tables_csv(std::ostream& os, const Problem& problem,
                            std::span<const ValueTable> tables);

namespace reference {

/// Single-objective, single-threaded recursion that goes straight through
/// SystemSpec::step and mesh::interpolate. Kept as the ground truth for the
/// batched kernel.
Solution solve(const Problem& problem, const Objective& objective,
               const SolveOptions& options = {});

}  // namespace reference

}  // namespace rst::dp
