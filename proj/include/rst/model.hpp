#pragma once

// Uncertain discrete-time control system with mixed (state/control) stage
// constraints and an end-point constraint, all parametrized by a threshold
// vector c. Everything here is evaluated exactly: no grids, no snapping.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rst {

using State = std::vector<double>;
using Control = std::vector<double>;
using ScenarioId = int;

using ControlPath = std::vector<Control>;
using ScenarioPath = std::vector<ScenarioId>;
using Trajectory = std::vector<State>;

/// Point c in R^m. Entries must be finite; huge values are fine.
class ThresholdVector {
 public:
  ThresholdVector() = default;
  explicit ThresholdVector(std::vector<double> values);
  ThresholdVector(std::initializer_list<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  /// c + t * (1, ..., 1)
  ThresholdVector shifted(double t) const;
  ThresholdVector with(std::size_t i, double value) const;

  friend bool operator==(const ThresholdVector&, const ThresholdVector&) = default;

 private:
  std::vector<double> values_;
};

/// a <= b in every component. Sizes must match.
bool componentwise_leq(const ThresholdVector& a, const ThresholdVector& b);

std::string to_string(const ThresholdVector& c);

/// Axis-aligned box standing in for the compact control space U.
struct ControlBox {
  std::vector<double> lower;
  std::vector<double> upper;

  bool contains(std::span<const double> u, double slack = 1e-12) const;
};

/// Immutable description of the system. Safe to share read-only across threads.
class SystemSpec {
 public:
  using Dynamics = std::function<void(std::size_t k, std::span<const double> x,
                                      std::span<const double> u, ScenarioId w,
                                      std::span<double> out)>;
  using StageConstraint = std::function<void(std::size_t k, std::span<const double> x,
                                             std::span<const double> u,
                                             std::span<double> out)>;
  using TerminalConstraint =
      std::function<void(std::span<const double> x, std::span<double> out)>;

  struct Definition {
    std::string name;
    std::size_t horizon = 0;
    std::size_t state_dim = 1;
    std::size_t threshold_dim = 1;
    Dynamics dynamics;
    StageConstraint stage_constraints;
    TerminalConstraint terminal_constraint;
    ControlBox control_set;
    /// Omega_k for k = 0..N. A single entry is broadcast to every stage.
    std::vector<std::vector<ScenarioId>> scenario_sets;
  };

  explicit SystemSpec(Definition def);

  const std::string& name() const noexcept { return def_.name; }
  std::size_t horizon() const noexcept { return def_.horizon; }
  std::size_t state_dim() const noexcept { return def_.state_dim; }
  std::size_t control_dim() const noexcept { return def_.control_set.lower.size(); }
  std::size_t threshold_dim() const noexcept { return def_.threshold_dim; }
  const ControlBox& control_set() const noexcept { return def_.control_set; }
  const std::vector<ScenarioId>& scenarios(std::size_t k) const;
  bool has_scenario(std::size_t k, ScenarioId w) const;

  /// F_k(x, u, w). Throws std::out_of_range for k > N and
  /// std::invalid_argument when w is not in Omega_k.
  State step(std::size_t k, std::span<const double> x, std::span<const double> u,
             ScenarioId w) const;
  /// Allocation-free variant used by the solvers; skips the Omega_k lookup.
  void step_into(std::size_t k, std::span<const double> x, std::span<const double> u,
                 ScenarioId w, std::span<double> out) const {
    def_.dynamics(k, x, u, w, out);
  }

  /// g^k(x, u). Never compares against a threshold.
  std::vector<double> stage_constraint(std::size_t k, std::span<const double> x,
                                       std::span<const double> u) const;
  void stage_constraint_into(std::size_t k, std::span<const double> x,
                             std::span<const double> u, std::span<double> out) const {
    def_.stage_constraints(k, x, u, out);
  }

  /// theta(x).
  std::vector<double> terminal_constraint(std::span<const double> x) const;
  void terminal_constraint_into(std::span<const double> x, std::span<double> out) const {
    def_.terminal_constraint(x, out);
  }

  /// Same system with Omega_k replaced by {w} at every stage. Requires w to be
  /// in every Omega_k (the constant scenario must exist).
  SystemSpec with_constant_scenario(ScenarioId w) const;
  /// Same system, different horizon. Scenario sets must be broadcastable.
  SystemSpec with_horizon(std::size_t horizon) const;

 private:
  void check_stage(std::size_t k) const;

  Definition def_;
};

/// x_0 = xi, x_{k+1} = F_k(x_k, u_k, w_k). Throws std::invalid_argument on
/// length mismatch (N+1 controls and N+1 scenarios expected).
Trajectory simulate(const SystemSpec& sys, std::span<const double> xi, const ControlPath& u,
                    const ScenarioPath& w);

/// g^k(x_k, u_k) >= c for all k and theta(x_{N+1}) >= c along simulate(xi, u, w).
bool check_admissible(const SystemSpec& sys, std::span<const double> xi, const ControlPath& u,
                      const ScenarioPath& w, const ThresholdVector& c);

}  // namespace rst
