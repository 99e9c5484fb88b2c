#pragma once

// Finite-state test systems: states are the integers 0..S-1 (one grid node
// each), controls are the integers 0..U-1, and every transition lands on a
// node, so nearest-node interpolation introduces no error.

#include <cstddef>
#include <vector>

#include "rst/mesh.hpp"
#include "rst/model.hpp"

namespace rst::tabular {

struct TabularTables {
  std::size_t states = 0;
  std::size_t controls = 0;
  /// Omega_k = {0, .., scenarios-1} at every stage.
  std::size_t scenarios = 0;
  std::size_t threshold_dim = 0;
  std::size_t horizon = 0;
  /// next[k][x][u][w] for k = 0..N.
  std::vector<std::vector<std::vector<std::vector<std::size_t>>>> next;
  /// g[k][x][u] is a vector of length threshold_dim.
  std::vector<std::vector<std::vector<std::vector<double>>>> g;
  /// theta[x] is a vector of length threshold_dim.
  std::vector<std::vector<double>> theta;

  /// Throws std::invalid_argument naming the offending table entry.
  void validate() const;
  /// Largest g or theta entry per component.
  std::vector<double> max_values() const;
};

SystemSpec build_tabular_system(const TabularTables& t);
/// [0, S-1] with S nodes, spacing exactly 1.
StateGrid tabular_grid(const TabularTables& t);
/// The controls 0..U-1 as one-element vectors.
ControlMesh tabular_controls(const TabularTables& t);

}  // namespace rst::tabular
