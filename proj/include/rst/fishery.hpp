#pragma once

// Renewable-resource benchmark: Beverton-Holt stock recruitment under two
// growth scenarios, harvest as the control, thresholds on stock and harvest.

#include <cstddef>
#include <vector>

#include "rst/model.hpp"

namespace rst::fishery {

struct GrowthScenario {
  double r;  // intrinsic growth per period
  double K;  // carrying capacity (stock units)
};

inline constexpr ScenarioId kScenarioA = 0;
inline constexpr ScenarioId kScenarioB = 1;

struct FisheryParams {
  /// Indexed by ScenarioId: {omega_a, omega_b}.
  std::vector<GrowthScenario> scenarios{{0.39, 90.0}, {2.0, 50.0}};
  /// Omega_k used at every stage.
  std::vector<ScenarioId> active{kScenarioA, kScenarioB};
  double u_max = 40.0;
  /// Second terminal component, large enough never to bind the harvest threshold.
  double m_big = 1e6;

  const GrowthScenario& scenario(ScenarioId w) const;
  void validate() const;
};

/// (1 + r) x / (1 + (r / K) x). Throws std::domain_error for x < 0.
double beverton_holt(double x, const GrowthScenario& s);
/// sigma(x) = f(x) - x, the equilibrium harvest at stock x.
double surplus(double x, const GrowthScenario& s);
/// K / (1 + sqrt(1 + r)).
double x_msy(const GrowthScenario& s);
/// K (sqrt(1 + r) - 1)^2 / r = surplus(x_msy).
double msy(const GrowthScenario& s);

/// Closed-form infinite-horizon deterministic threshold set:
/// x_lim <= min(xi, K) and h_lim <= sigma(x_lim).
bool analytic_det_set_membership(double xi, const GrowthScenario& s, const ThresholdVector& c);
/// Intersection of the deterministic sets over the active scenarios.
bool analytic_intersection_membership(double xi, const FisheryParams& params,
                                      const ThresholdVector& c);
/// min over active scenarios of sigma(x).
double min_surplus(double x, const FisheryParams& params);

/// x_{k+1} = f(x_k, w_k) - u_k, g^k(x, u) = (x, u), theta(x) = (x, M_big),
/// U = [0, u_max].
SystemSpec build_fishery_system(const FisheryParams& params, std::size_t horizon);

}  // namespace rst::fishery
