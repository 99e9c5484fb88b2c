#include "rst/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rst/csv.hpp"

namespace rst {

ThresholdVector::ThresholdVector(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("threshold entries must be finite");
  }
}

ThresholdVector::ThresholdVector(std::initializer_list<double> values)
    : ThresholdVector(std::vector<double>(values)) {}

ThresholdVector ThresholdVector::shifted(double t) const {
  std::vector<double> out = values_;
  for (double& v : out) v += t;
  return ThresholdVector(std::move(out));
}

ThresholdVector ThresholdVector::with(std::size_t i, double value) const {
  std::vector<double> out = values_;
  out.at(i) = value;
  return ThresholdVector(std::move(out));
}

bool componentwise_leq(const ThresholdVector& a, const ThresholdVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("threshold dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

std::string to_string(const ThresholdVector& c) {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ", ";
    s += format_double(c[i]);
  }
  return s + ")";
}

bool ControlBox::contains(std::span<const double> u, double slack) const {
  if (u.size() != lower.size()) return false;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < lower[i] - slack || u[i] > upper[i] + slack) return false;
  }
  return true;
}

SystemSpec::SystemSpec(Definition def) : def_(std::move(def)) {
  if (def_.state_dim == 0) throw std::invalid_argument("state_dim must be positive");
  if (def_.threshold_dim == 0) throw std::invalid_argument("threshold_dim must be positive");
  if (!def_.dynamics || !def_.stage_constraints || !def_.terminal_constraint) {
    throw std::invalid_argument("dynamics and constraint maps are required");
  }
  const auto& box = def_.control_set;
  if (box.lower.empty() || box.lower.size() != box.upper.size()) {
    throw std::invalid_argument("control set must be a nonempty box");
  }
  for (std::size_t i = 0; i < box.lower.size(); ++i) {
    if (!(box.lower[i] <= box.upper[i])) throw std::invalid_argument("control box lower > upper");
  }
  auto& sets = def_.scenario_sets;
  if (sets.size() == 1 && def_.horizon > 0) sets.resize(def_.horizon + 1, sets.front());
  if (sets.size() != def_.horizon + 1) {
    throw std::invalid_argument("scenario_sets must have one entry per stage 0..N");
  }
  for (const auto& s : sets) {
    if (s.empty()) throw std::invalid_argument("every scenario set must be nonempty");
  }
}

void SystemSpec::check_stage(std::size_t k) const {
  if (k > def_.horizon) {
    throw std::out_of_range("stage " + std::to_string(k) + " outside [0, " +
                            std::to_string(def_.horizon) + "]");
  }
}

const std::vector<ScenarioId>& SystemSpec::scenarios(std::size_t k) const {
  check_stage(k);
  return def_.scenario_sets[k];
}

bool SystemSpec::has_scenario(std::size_t k, ScenarioId w) const {
  const auto& s = scenarios(k);
  return std::find(s.begin(), s.end(), w) != s.end();
}

State SystemSpec::step(std::size_t k, std::span<const double> x, std::span<const double> u,
                       ScenarioId w) const {
  check_stage(k);
  if (!has_scenario(k, w)) {
    throw std::invalid_argument("scenario " + std::to_string(w) + " not in Omega_" +
                                std::to_string(k));
  }
  if (x.size() != def_.state_dim) throw std::invalid_argument("state dimension mismatch");
  if (u.size() != control_dim()) throw std::invalid_argument("control dimension mismatch");
  State out(def_.state_dim);
  def_.dynamics(k, x, u, w, out);
  return out;
}

std::vector<double> SystemSpec::stage_constraint(std::size_t k, std::span<const double> x,
                                                 std::span<const double> u) const {
  check_stage(k);
  std::vector<double> out(def_.threshold_dim);
  def_.stage_constraints(k, x, u, out);
  return out;
}

std::vector<double> SystemSpec::terminal_constraint(std::span<const double> x) const {
  std::vector<double> out(def_.threshold_dim);
  def_.terminal_constraint(x, out);
  return out;
}

SystemSpec SystemSpec::with_constant_scenario(ScenarioId w) const {
  Definition def = def_;
  for (std::size_t k = 0; k <= def_.horizon; ++k) {
    if (!has_scenario(k, w)) {
      throw std::invalid_argument("constant scenario " + std::to_string(w) +
                                  " missing from Omega_" + std::to_string(k));
    }
  }
  def.scenario_sets.assign(def_.horizon + 1, std::vector<ScenarioId>{w});
  def.name += "[w=" + std::to_string(w) + "]";
  return SystemSpec(std::move(def));
}

SystemSpec SystemSpec::with_horizon(std::size_t horizon) const {
  Definition def = def_;
  const bool uniform = std::all_of(def_.scenario_sets.begin(), def_.scenario_sets.end(),
                                   [&](const auto& s) { return s == def_.scenario_sets.front(); });
  if (!uniform) throw std::invalid_argument("with_horizon needs stage-invariant scenario sets");
  def.horizon = horizon;
  def.scenario_sets.assign(horizon + 1, def_.scenario_sets.front());
  return SystemSpec(std::move(def));
}

Trajectory simulate(const SystemSpec& sys, std::span<const double> xi, const ControlPath& u,
                    const ScenarioPath& w) {
  const std::size_t n = sys.horizon() + 1;
  if (u.size() != n || w.size() != n) {
    throw std::invalid_argument("control and scenario paths need N+1 = " + std::to_string(n) +
                                " entries");
  }
  Trajectory x;
  x.reserve(n + 1);
  x.emplace_back(xi.begin(), xi.end());
  for (std::size_t k = 0; k < n; ++k) x.push_back(sys.step(k, x[k], u[k], w[k]));
  return x;
}

bool check_admissible(const SystemSpec& sys, std::span<const double> xi, const ControlPath& u,
                      const ScenarioPath& w, const ThresholdVector& c) {
  const Trajectory x = simulate(sys, xi, u, w);
  const std::size_t m = sys.threshold_dim();
  if (c.size() != m) throw std::invalid_argument("threshold dimension mismatch");
  for (std::size_t k = 0; k <= sys.horizon(); ++k) {
    const auto g = sys.stage_constraint(k, x[k], u[k]);
    for (std::size_t i = 0; i < m; ++i) {
      if (g[i] < c[i]) return false;
    }
  }
  const auto th = sys.terminal_constraint(x.back());
  for (std::size_t i = 0; i < m; ++i) {
    if (th[i] < c[i]) return false;
  }
  return true;
}

}  // namespace rst
