#include "rst/fishery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rst::fishery {

const GrowthScenario& FisheryParams::scenario(ScenarioId w) const {
  if (w < 0 || static_cast<std::size_t>(w) >= scenarios.size()) {
    throw std::invalid_argument("unknown fishery scenario " + std::to_string(w));
  }
  return scenarios[static_cast<std::size_t>(w)];
}

void FisheryParams::validate() const {
  if (scenarios.empty()) throw std::invalid_argument("fishery needs at least one scenario");
  for (const auto& s : scenarios) {
    if (!(s.r > 0) || !(s.K > 0)) throw std::invalid_argument("fishery r and K must be positive");
  }
  if (active.empty()) throw std::invalid_argument("fishery active scenario set is empty");
  for (ScenarioId w : active) (void)scenario(w);
  if (!(u_max > 0)) throw std::invalid_argument("fishery u_max must be positive");
  if (!(m_big > u_max)) throw std::invalid_argument("fishery M_big must exceed u_max");
}

double beverton_holt(double x, const GrowthScenario& s) {
  if (x < 0) throw std::domain_error("Beverton-Holt stock must be nonnegative");
  return (1.0 + s.r) * x / (1.0 + (s.r / s.K) * x);
}

double surplus(double x, const GrowthScenario& s) { return beverton_holt(x, s) - x; }

double x_msy(const GrowthScenario& s) { return s.K / (1.0 + std::sqrt(1.0 + s.r)); }

double msy(const GrowthScenario& s) {
  const double q = std::sqrt(1.0 + s.r) - 1.0;
  return s.K * q * q / s.r;
}

bool analytic_det_set_membership(double xi, const GrowthScenario& s, const ThresholdVector& c) {
  if (c.size() != 2) throw std::invalid_argument("fishery thresholds are (x_lim, h_lim)");
  const double x_lim = c[0];
  const double h_lim = c[1];
  if (x_lim > std::min(xi, s.K)) return false;
  // sigma is only defined on the nonnegative stock axis; negative stock
  // thresholds are bounded by sigma(0) = 0.
  return h_lim <= surplus(std::max(x_lim, 0.0), s);
}

bool analytic_intersection_membership(double xi, const FisheryParams& params,
                                      const ThresholdVector& c) {
  return std::all_of(params.active.begin(), params.active.end(), [&](ScenarioId w) {
    return analytic_det_set_membership(xi, params.scenario(w), c);
  });
}

double min_surplus(double x, const FisheryParams& params) {
  double v = std::numeric_limits<double>::infinity();
  for (ScenarioId w : params.active) v = std::min(v, surplus(x, params.scenario(w)));
  return v;
}

SystemSpec build_fishery_system(const FisheryParams& params, std::size_t horizon) {
  params.validate();
  SystemSpec::Definition def;
  def.name = "fishery-beverton-holt";
  def.horizon = horizon;
  def.state_dim = 1;
  def.threshold_dim = 2;
  def.dynamics = [scen = params.scenarios](std::size_t, std::span<const double> x,
                                           std::span<const double> u, ScenarioId w,
                                           std::span<double> out) {
    out[0] = beverton_holt(x[0], scen.at(static_cast<std::size_t>(w))) - u[0];
  };
  def.stage_constraints = [](std::size_t, std::span<const double> x, std::span<const double> u,
                             std::span<double> out) {
    out[0] = x[0];
    out[1] = u[0];
  };
  def.terminal_constraint = [m_big = params.m_big](std::span<const double> x,
                                                   std::span<double> out) {
    out[0] = x[0];
    out[1] = m_big;
  };
  def.control_set = ControlBox{{0.0}, {params.u_max}};
  def.scenario_sets = {params.active};
  return SystemSpec(std::move(def));
}

}  // namespace rst::fishery
