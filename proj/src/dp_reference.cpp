#include <algorithm>
#include <cmath>
#include <limits>

#include "rst/dp.hpp"

namespace rst::dp::reference {

namespace {

ValueTable empty_table(const Problem& p, std::size_t stage, const Objective& obj) {
  ValueTable t;
  t.stage = stage;
  t.threshold = obj.threshold();
  t.values.assign(p.grid().size(), std::numeric_limits<double>::quiet_NaN());
  t.populated.assign(p.grid().size(), 0);
  return t;
}

}  // namespace

Solution solve(const Problem& p, const Objective& obj, const SolveOptions& options) {
  const SystemSpec& sys = p.system();
  const StateGrid& grid = p.grid();
  const ReachableSets& reach = p.reach();
  const std::size_t N = sys.horizon();
  const auto sentinel = obj.sentinel();

  std::vector<ValueTable> tables(N + 2);
  tables[N + 1] = empty_table(p, N + 1, obj);
  for (std::size_t node : reach.nodes(N + 1)) {
    const State x = grid.coordinate(node);
    tables[N + 1].values[node] = obj.terminal_reward(sys.terminal_constraint(x));
    tables[N + 1].populated[node] = 1;
  }

  Solution sol;
  if (options.keep_policy) {
    sol.policy.control_index.assign(N + 1, std::vector<std::int32_t>(grid.size(), -1));
  }

  for (std::size_t n = N + 1; n-- > 0;) {
    tables[n] = empty_table(p, n, obj);
    for (std::size_t node : reach.nodes(n)) {
      const State x = grid.coordinate(node);
      double best = -std::numeric_limits<double>::infinity();
      std::int32_t arg = -1;
      for (std::size_t ui = 0; ui < p.controls().size(); ++ui) {
        if (options.fixed_policy && options.fixed_policy->at(n, node) != static_cast<std::int32_t>(ui)) {
          continue;
        }
        const Control& u = p.controls()[ui];
        double inner = std::numeric_limits<double>::infinity();
        for (ScenarioId w : sys.scenarios(n)) {
          const State next = sys.step(n, x, u, w);
          inner = std::min(inner, interpolate(tables[n + 1], grid, next, p.interp(), sentinel));
        }
        const double val = std::min(inner, obj.stage_reward(sys.stage_constraint(n, x, u)));
        if (arg < 0 || val > best) {
          best = val;
          arg = static_cast<std::int32_t>(ui);
        }
      }
      if (arg < 0) throw std::logic_error("fixed policy has no control at a reachable node");
      tables[n].values[node] = best;
      tables[n].populated[node] = 1;
      if (options.keep_policy) sol.policy.control_index[n][node] = arg;
    }
  }

  sol.root_value = interpolate(tables[0], grid, p.initial_state(), p.interp(), sentinel);
  if (options.keep_tables) sol.tables = std::move(tables);
  return sol;
}

}  // namespace rst::dp::reference
