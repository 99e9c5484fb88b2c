#include "rst/tabular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

namespace rst::tabular {

namespace {

std::size_t as_index(double v, std::size_t limit, const char* what) {
  if (!(v >= 0) || v != std::floor(v) || v >= static_cast<double>(limit)) {
    throw std::invalid_argument(std::string("tabular ") + what + " must be an integer in [0, " +
                                std::to_string(limit) + ")");
  }
  return static_cast<std::size_t>(v);
}

void check_size(std::size_t got, std::size_t want, const std::string& where) {
  if (got != want) {
    throw std::invalid_argument("tabular " + where + " has " + std::to_string(got) +
                                " entries, expected " + std::to_string(want));
  }
}

}  // namespace

void TabularTables::validate() const {
  if (states < 2) throw std::invalid_argument("tabular system needs at least 2 states");
  if (controls == 0) throw std::invalid_argument("tabular system needs at least 1 control");
  if (scenarios == 0) throw std::invalid_argument("tabular system needs at least 1 scenario");
  if (threshold_dim == 0) throw std::invalid_argument("tabular threshold_dim must be positive");
  check_size(next.size(), horizon + 1, "next");
  check_size(g.size(), horizon + 1, "g");
  check_size(theta.size(), states, "theta");
  for (std::size_t k = 0; k <= horizon; ++k) {
    const std::string sk = "[" + std::to_string(k) + "]";
    check_size(next[k].size(), states, "next" + sk);
    check_size(g[k].size(), states, "g" + sk);
    for (std::size_t x = 0; x < states; ++x) {
      const std::string sx = sk + "[" + std::to_string(x) + "]";
      check_size(next[k][x].size(), controls, "next" + sx);
      check_size(g[k][x].size(), controls, "g" + sx);
      for (std::size_t u = 0; u < controls; ++u) {
        const std::string su = sx + "[" + std::to_string(u) + "]";
        check_size(next[k][x][u].size(), scenarios, "next" + su);
        for (std::size_t y : next[k][x][u]) {
          if (y >= states) throw std::invalid_argument("tabular next" + su + " leaves the state set");
        }
        check_size(g[k][x][u].size(), threshold_dim, "g" + su);
        for (double v : g[k][x][u]) {
          if (!std::isfinite(v)) throw std::invalid_argument("tabular g" + su + " is not finite");
        }
      }
    }
  }
  for (std::size_t x = 0; x < states; ++x) {
    const std::string sx = "theta[" + std::to_string(x) + "]";
    check_size(theta[x].size(), threshold_dim, sx);
    for (double v : theta[x]) {
      if (!std::isfinite(v)) throw std::invalid_argument("tabular " + sx + " is not finite");
    }
  }
}

std::vector<double> TabularTables::max_values() const {
  std::vector<double> out(threshold_dim, -std::numeric_limits<double>::infinity());
  for (const auto& stage : g)
    for (const auto& row : stage)
      for (const auto& gv : row)
        for (std::size_t i = 0; i < threshold_dim; ++i) out[i] = std::max(out[i], gv[i]);
  for (const auto& tv : theta)
    for (std::size_t i = 0; i < threshold_dim; ++i) out[i] = std::max(out[i], tv[i]);
  return out;
}

SystemSpec build_tabular_system(const TabularTables& t) {
  t.validate();
  auto tables = std::make_shared<const TabularTables>(t);
  SystemSpec::Definition def;
  def.name = "tabular";
  def.horizon = t.horizon;
  def.state_dim = 1;
  def.threshold_dim = t.threshold_dim;
  def.dynamics = [tables](std::size_t k, std::span<const double> x, std::span<const double> u,
                          ScenarioId w, std::span<double> out) {
    const auto& tb = *tables;
    const std::size_t xi = as_index(x[0], tb.states, "state");
    const std::size_t ui = as_index(u[0], tb.controls, "control");
    out[0] = static_cast<double>(tb.next.at(k)[xi][ui].at(static_cast<std::size_t>(w)));
  };
  def.stage_constraints = [tables](std::size_t k, std::span<const double> x,
                                   std::span<const double> u, std::span<double> out) {
    const auto& tb = *tables;
    const auto& gv = tb.g.at(k)[as_index(x[0], tb.states, "state")]
                                [as_index(u[0], tb.controls, "control")];
    std::copy(gv.begin(), gv.end(), out.begin());
  };
  def.terminal_constraint = [tables](std::span<const double> x, std::span<double> out) {
    const auto& tv = tables->theta[as_index(x[0], tables->states, "state")];
    std::copy(tv.begin(), tv.end(), out.begin());
  };
  def.control_set = ControlBox{{0.0}, {static_cast<double>(t.controls - 1)}};
  std::vector<ScenarioId> omega(t.scenarios);
  for (std::size_t w = 0; w < t.scenarios; ++w) omega[w] = static_cast<ScenarioId>(w);
  def.scenario_sets = {omega};
  return SystemSpec(std::move(def));
}

StateGrid tabular_grid(const TabularTables& t) {
  if (t.states < 2) throw std::invalid_argument("tabular system needs at least 2 states");
  return StateGrid({{0.0, static_cast<double>(t.states - 1), t.states}});
}

ControlMesh tabular_controls(const TabularTables& t) {
  if (t.controls == 0) throw std::invalid_argument("tabular system needs at least 1 control");
  std::vector<Control> v;
  for (std::size_t u = 0; u < t.controls; ++u) v.push_back({static_cast<double>(u)});
  return ControlMesh(std::move(v));
}

}  // namespace rst::tabular
