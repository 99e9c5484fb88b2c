#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <vector>

#include "rst/dp.hpp"
#include "rst/fishery.hpp"
#include "rst/mesh.hpp"
#include "rst/tabular.hpp"

namespace rst::testing {

struct TabularShape {
  std::size_t max_states = 12;
  std::size_t max_controls = 4;
  std::size_t scenarios = 2;
  std::size_t max_horizon = 3;
  std::size_t m = 2;
  int max_value = 10;
};

inline tabular::TabularTables random_tables(std::mt19937_64& rng, const TabularShape& shape = {}) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  std::uniform_int_distribution<int> value(0, shape.max_value);
  tabular::TabularTables t;
  t.states = pick(2, shape.max_states);
  t.controls = pick(1, shape.max_controls);
  t.scenarios = shape.scenarios;
  t.threshold_dim = shape.m;
  t.horizon = pick(0, shape.max_horizon);
  t.next.resize(t.horizon + 1);
  t.g.resize(t.horizon + 1);
  for (std::size_t k = 0; k <= t.horizon; ++k) {
    t.next[k].assign(t.states, std::vector<std::vector<std::size_t>>(t.controls));
    t.g[k].assign(t.states, std::vector<std::vector<double>>(t.controls));
    for (std::size_t x = 0; x < t.states; ++x) {
      for (std::size_t u = 0; u < t.controls; ++u) {
        for (std::size_t w = 0; w < t.scenarios; ++w) t.next[k][x][u].push_back(pick(0, t.states - 1));
        for (std::size_t i = 0; i < shape.m; ++i) t.g[k][x][u].push_back(value(rng));
      }
    }
  }
  t.theta.resize(t.states);
  for (auto& th : t.theta) {
    for (std::size_t i = 0; i < shape.m; ++i) th.push_back(value(rng));
  }
  return t;
}

struct TabularInstance {
  tabular::TabularTables tables;
  std::shared_ptr<const SystemSpec> system;
  std::unique_ptr<dp::Problem> problem;

  const SystemSpec& sys() const { return *system; }
  const ControlMesh& controls() const { return problem->controls(); }
  const State& xi() const { return problem->initial_state(); }
};

inline TabularInstance make_instance(tabular::TabularTables tables, std::size_t x0,
                                     InterpMode mode = InterpMode::nearest) {
  TabularInstance inst;
  inst.tables = std::move(tables);
  inst.system = std::make_shared<const SystemSpec>(tabular::build_tabular_system(inst.tables));
  inst.problem = std::make_unique<dp::Problem>(
      inst.system, tabular::tabular_grid(inst.tables), tabular::tabular_controls(inst.tables),
      State{static_cast<double>(x0)}, dp::Problem::Options{mode, false});
  return inst;
}

inline TabularInstance random_instance(std::mt19937_64& rng, const TabularShape& shape = {}) {
  auto tables = random_tables(rng, shape);
  const std::size_t x0 = std::uniform_int_distribution<std::size_t>(0, tables.states - 1)(rng);
  return make_instance(std::move(tables), x0);
}

inline ThresholdVector random_threshold(std::mt19937_64& rng, std::size_t m, double lo = -1.0,
                                        double hi = 11.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> c(m);
  for (auto& v : c) v = u(rng);
  return ThresholdVector(std::move(c));
}

/// Nodes reachable in exactly n steps by breadth-first search over the tables.
inline std::vector<std::vector<std::size_t>> bfs_reachable(const tabular::TabularTables& t,
                                                           std::size_t x0) {
  std::vector<std::vector<std::size_t>> out(t.horizon + 2);
  out[0] = {x0};
  for (std::size_t k = 0; k <= t.horizon; ++k) {
    std::vector<unsigned char> seen(t.states, 0);
    for (std::size_t x : out[k])
      for (const auto& row : t.next[k][x])
        for (std::size_t y : row) seen[y] = 1;
    for (std::size_t y = 0; y < t.states; ++y)
      if (seen[y]) out[k + 1].push_back(y);
  }
  return out;
}

/// Closed-loop worst case of min over time of component j along a tabular
/// feedback policy, by direct recursion over the scenario tree.
inline double policy_component_value(const tabular::TabularTables& t,
                                     const dp::FeedbackPolicy& policy, std::size_t j,
                                     std::size_t k, std::size_t x) {
  if (k == t.horizon + 1) return t.theta[x][j];
  const auto u = static_cast<std::size_t>(policy.at(k, x));
  double v = t.g[k][x][u][j];
  for (std::size_t y : t.next[k][x][u]) v = std::min(v, policy_component_value(t, policy, j, k + 1, y));
  return v;
}

}  // namespace rst::testing
