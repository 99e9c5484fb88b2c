#include "rst/oracle.hpp"

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

namespace rst::oracle {

namespace {

class Counter {
 public:
  explicit Counter(const OracleBudget& b) : limit_(b.max_expansions) {
    if (limit_ == 0) throw std::invalid_argument("oracle budget must be positive");
  }
  void tick(std::uint64_t n = 1) {
    used_ += n;
    if (used_ > limit_) {
      throw BudgetExceeded("oracle budget of " + std::to_string(limit_) + " expansions exceeded");
    }
  }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

double game(const SystemSpec& sys, const ControlMesh& controls, const dp::Objective& obj,
            std::size_t n, const State& x, Counter& counter) {
  counter.tick();
  if (n == sys.horizon() + 1) return obj.terminal_reward(sys.terminal_constraint(x));
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& u : controls.values()) {
    double inner = std::numeric_limits<double>::infinity();
    for (ScenarioId w : sys.scenarios(n)) {
      inner = std::min(inner, game(sys, controls, obj, n + 1, sys.step(n, x, u, w), counter));
    }
    best = std::max(best, std::min(inner, obj.stage_reward(sys.stage_constraint(n, x, u))));
  }
  return best;
}

void check_threshold(const SystemSpec& sys, const ThresholdVector& c) {
  if (c.size() != sys.threshold_dim()) throw std::invalid_argument("threshold dimension mismatch");
}

// Enumerates control paths in lexicographic mesh order; `visit` returns true to stop.
template <class Visit>
void for_each_control_path(const SystemSpec& sys, const ControlMesh& controls, Visit&& visit) {
  const std::size_t len = sys.horizon() + 1;
  std::vector<std::size_t> idx(len, 0);
  ControlPath path(len, controls[0]);
  while (true) {
    if (visit(path)) return;
    std::size_t k = len;
    while (k > 0) {
      --k;
      if (++idx[k] < controls.size()) {
        path[k] = controls[idx[k]];
        break;
      }
      idx[k] = 0;
      path[k] = controls[0];
      if (k == 0) return;
    }
  }
}

// Worst case over scenario paths of R^c along a fixed control path.
double worst_case(const SystemSpec& sys, const ControlPath& u, const ThresholdVector& c,
                  std::size_t k, const State& x, std::vector<double> running, Counter& counter) {
  counter.tick();
  const std::size_t m = c.size();
  if (k == sys.horizon() + 1) {
    const auto th = sys.terminal_constraint(x);
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) r = std::min(r, std::min(running[j], th[j]) - c[j]);
    return r;
  }
  const auto g = sys.stage_constraint(k, x, u[k]);
  for (std::size_t j = 0; j < m; ++j) running[j] = std::min(running[j], g[j]);
  double worst = std::numeric_limits<double>::infinity();
  for (ScenarioId w : sys.scenarios(k)) {
    worst = std::min(worst, worst_case(sys, u, c, k + 1, sys.step(k, x, u[k], w), running, counter));
  }
  return worst;
}

template <class Visit>
bool any_scenario_path(const SystemSpec& sys, std::size_t k, ScenarioPath& w, Visit&& visit) {
  if (k == sys.horizon() + 1) return visit(w);
  for (ScenarioId s : sys.scenarios(k)) {
    w[k] = s;
    if (any_scenario_path(sys, k + 1, w, visit)) return true;
  }
  return false;
}

}  // namespace

double closedloop_game(const SystemSpec& sys, const ControlMesh& controls,
                       std::span<const double> xi, const dp::Objective& objective,
                       const OracleBudget& budget, std::size_t n0) {
  if (n0 > sys.horizon() + 1) throw std::out_of_range("oracle start stage beyond N+1");
  if (xi.size() != sys.state_dim()) throw std::invalid_argument("state dimension mismatch");
  Counter counter(budget);
  return game(sys, controls, objective, n0, State(xi.begin(), xi.end()), counter);
}

double closedloop_maximin(const SystemSpec& sys, const ControlMesh& controls,
                          std::span<const double> xi, const ThresholdVector& c,
                          const OracleBudget& budget, std::size_t n0) {
  check_threshold(sys, c);
  return closedloop_game(sys, controls, xi, dp::Objective::level_set(c), budget, n0);
}

double openloop_maximin(const SystemSpec& sys, const ControlMesh& controls,
                        std::span<const double> xi, const ThresholdVector& c,
                        const OracleBudget& budget) {
  check_threshold(sys, c);
  Counter counter(budget);
  const State x0(xi.begin(), xi.end());
  const std::vector<double> start(c.size(), std::numeric_limits<double>::infinity());
  double best = -std::numeric_limits<double>::infinity();
  for_each_control_path(sys, controls, [&](const ControlPath& u) {
    best = std::max(best, worst_case(sys, u, c, 0, x0, start, counter));
    return false;
  });
  return best;
}

bool exhaustive_membership(const SystemSpec& sys, const ControlMesh& controls,
                           std::span<const double> xi, const ThresholdVector& c,
                           const OracleBudget& budget) {
  check_threshold(sys, c);
  Counter counter(budget);
  const std::uint64_t cost = sys.horizon() + 2;
  bool found = false;
  ScenarioPath w(sys.horizon() + 1);
  for_each_control_path(sys, controls, [&](const ControlPath& u) {
    const bool violated = any_scenario_path(sys, 0, w, [&](const ScenarioPath& path) {
      counter.tick(cost);
      return !check_admissible(sys, xi, u, path, c);
    });
    found = !violated;
    return found;
  });
  return found;
}

}  // namespace rst::oracle
