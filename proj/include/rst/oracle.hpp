#pragma once

// Brute-force reference evaluators on exact (ungridded) states. They share
// the control mesh with the grid solver, so agreement tests isolate the
// recursion from the discretization of U.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "rst/dp.hpp"
#include "rst/mesh.hpp"
#include "rst/model.hpp"

namespace rst::oracle {

struct OracleBudget {
  std::uint64_t max_expansions = 10'000'000;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// value(n, x) = max_u min{ min_w value(n+1, F_n(x, u, w)), Phi^c_n(x, u) },
/// value(N+1, x) = Theta^c(x), evaluated from (n0, xi) by full tree recursion.
double closedloop_maximin(const SystemSpec& sys, const ControlMesh& controls,
                          std::span<const double> xi, const ThresholdVector& c,
                          const OracleBudget& budget = {}, std::size_t n0 = 0);

/// Same game tree with an arbitrary stage/terminal reward pair.
double closedloop_game(const SystemSpec& sys, const ControlMesh& controls,
                       std::span<const double> xi, const dp::Objective& objective,
                       const OracleBudget& budget = {}, std::size_t n0 = 0);

/// max over control paths of min over scenario paths of
/// R^c = min_j [ min{ min_k g^k_j, theta_j } - c_j ].
double openloop_maximin(const SystemSpec& sys, const ControlMesh& controls,
                        std::span<const double> xi, const ThresholdVector& c,
                        const OracleBudget& budget = {});

/// Some control path is admissible against every scenario path.
bool exhaustive_membership(const SystemSpec& sys, const ControlMesh& controls,
                           std::span<const double> xi, const ThresholdVector& c,
                           const OracleBudget& budget = {});

}  // namespace rst::oracle
