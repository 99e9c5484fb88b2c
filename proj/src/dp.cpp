#include "rst/dp.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>

#include "rst/csv.hpp"

namespace rst::dp {

double phi(const SystemSpec& sys, std::size_t k, std::span<const double> x,
           std::span<const double> u, const ThresholdVector& c) {
  const auto g = sys.stage_constraint(k, x, u);
  if (c.size() != g.size()) throw std::invalid_argument("threshold dimension mismatch");
  double v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) v = std::min(v, g[i] - c[i]);
  return v;
}

double theta_c(const SystemSpec& sys, std::span<const double> x, const ThresholdVector& c) {
  const auto th = sys.terminal_constraint(x);
  if (c.size() != th.size()) throw std::invalid_argument("threshold dimension mismatch");
  double v = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < th.size(); ++i) v = std::min(v, th[i] - c[i]);
  return v;
}

// ---------------------------------------------------------------------------
// Objective

Objective Objective::level_set(ThresholdVector c) {
  return Objective(Kind::level_set, std::move(c), 0, kDefaultNegInf);
}

Objective Objective::constrained(ThresholdVector c, std::size_t component, double neg_inf) {
  if (component >= c.size()) throw std::out_of_range("constrained objective component out of range");
  return Objective(Kind::constrained, std::move(c), component, neg_inf);
}

Objective Objective::component(std::size_t j) {
  return Objective(Kind::component, ThresholdVector{}, j, kDefaultNegInf);
}

namespace {

double min_gap(std::span<const double> v, const ThresholdVector& c) {
  double out = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i) out = std::min(out, v[i] - c[i]);
  return out;
}

bool dominates(std::span<const double> v, const ThresholdVector& c) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] < c[i]) return false;
  }
  return true;
}

}  // namespace

double Objective::stage_reward(std::span<const double> g) const {
  switch (kind_) {
    case Kind::level_set:
      return min_gap(g, c_);
    case Kind::constrained:
      return dominates(g, c_) ? g[index_] : neg_inf_;
    case Kind::component:
      return g[index_];
  }
  return neg_inf_;
}

double Objective::terminal_reward(std::span<const double> theta) const {
  // Same structure as the stage reward with theta in place of g.
  return stage_reward(theta);
}

// ---------------------------------------------------------------------------
// Problem

namespace {

ReachableSets make_reach(const SystemSpec& sys, const StateGrid& grid, const ControlMesh& controls,
                         const State& xi, const Problem::Options& opt) {
  if (!grid.contains(xi)) throw std::invalid_argument("initial state lies outside the grid box");
  if (opt.full_grid) return full_grid_sets(grid, sys.horizon());
  return build_reachable_sets(xi, grid, sys, controls, opt.interp);
}

}  // namespace

Problem::Problem(std::shared_ptr<const SystemSpec> sys, StateGrid grid, ControlMesh controls,
                 State initial_state, Options options)
    : sys_(std::move(sys)),
      grid_(std::move(grid)),
      controls_(std::move(controls)),
      xi_(std::move(initial_state)),
      options_(options),
      reach_([&] {
        if (!sys_) throw std::invalid_argument("problem needs a system");
        if (grid_.dim() != sys_->state_dim()) {
          throw std::invalid_argument("grid dimension differs from state dimension");
        }
        if (controls_.dim() != sys_->control_dim()) {
          throw std::invalid_argument("control mesh dimension differs from control set");
        }
        controls_.check_inside(*sys_);
        return make_reach(*sys_, grid_, controls_, xi_, options_);
      }()) {}

Problem Problem::with_initial_state(State xi) const {
  return Problem(sys_, grid_, controls_, std::move(xi), options_);
}

Problem Problem::with_system(std::shared_ptr<const SystemSpec> sys) const {
  return Problem(std::move(sys), grid_, controls_, xi_, options_);
}

// ---------------------------------------------------------------------------
// Batched kernel

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ValueTable snapshot(const std::vector<double>& values, const ReachableSets& reach,
                    std::size_t stage, const Objective& obj) {
  ValueTable t;
  t.stage = stage;
  t.threshold = obj.threshold();
  t.values = values;
  t.populated = reach.mask(stage);
  return t;
}

}  // namespace

std::vector<Solution> solve(const Problem& p, std::span<const Objective> objectives,
                            const SolveOptions& options) {
  const SystemSpec& sys = p.system();
  const StateGrid& grid = p.grid();
  const ReachableSets& reach = p.reach();
  const ControlMesh& controls = p.controls();
  const std::size_t N = sys.horizon();
  const std::size_t T = objectives.size();
  const std::size_t m = sys.threshold_dim();
  const std::size_t dim = grid.dim();

  std::vector<Solution> out(T);
  if (T == 0) return out;
  for (const auto& obj : objectives) {
    if (obj.kind() != Objective::Kind::component && obj.threshold().size() != m) {
      throw std::invalid_argument("threshold dimension differs from the system's m");
    }
    if (obj.kind() == Objective::Kind::component && obj.index() >= m) {
      throw std::out_of_range("component objective index out of range");
    }
  }
  if (options.fixed_policy && options.fixed_policy->control_index.size() != N + 1) {
    throw std::invalid_argument("fixed policy has the wrong number of stages");
  }

  std::vector<std::vector<double>> next(T, std::vector<double>(grid.size(), kNaN));
  std::vector<std::vector<double>> cur(T, std::vector<double>(grid.size(), kNaN));

  {
    State x(dim);
    std::vector<double> th(m);
    for (std::size_t node : reach.nodes(N + 1)) {
      grid.coordinate_into(node, x);
      sys.terminal_constraint_into(x, th);
      for (std::size_t t = 0; t < T; ++t) next[t][node] = objectives[t].terminal_reward(th);
    }
  }

  std::vector<std::vector<ValueTable>> tables(T);
  if (options.keep_tables) {
    for (std::size_t t = 0; t < T; ++t) {
      tables[t].resize(N + 2);
      tables[t][N + 1] = snapshot(next[t], reach, N + 1, objectives[t]);
    }
  }
  if (options.keep_policy) {
    for (auto& s : out) s.policy.control_index.assign(N + 1, std::vector<std::int32_t>(grid.size(), -1));
  }

  std::vector<std::optional<double>> sentinels(T);
  for (std::size_t t = 0; t < T; ++t) sentinels[t] = objectives[t].sentinel();

  for (std::size_t n = N + 1; n-- > 0;) {
    const auto& nodes = reach.nodes(n);
    const auto& omega = sys.scenarios(n);
    const auto& next_mask = reach.mask(n + 1);
    std::exception_ptr failure;

#pragma omp parallel
    {
      State x(dim);
      State succ(dim);
      std::vector<double> g(m);
      std::vector<Stencil> stencils(omega.size());
      std::vector<double> best(T);
      std::vector<std::int32_t> arg(T);

#pragma omp for schedule(dynamic, 8)
      for (std::size_t idx = 0; idx < nodes.size(); ++idx) {
        try {
          const std::size_t node = nodes[idx];
          grid.coordinate_into(node, x);
          std::fill(best.begin(), best.end(), -std::numeric_limits<double>::infinity());
          std::fill(arg.begin(), arg.end(), -1);

          std::size_t u_begin = 0;
          std::size_t u_end = controls.size();
          if (options.fixed_policy) {
            const std::int32_t fixed = options.fixed_policy->control_index[n].at(node);
            if (fixed < 0) throw std::logic_error("fixed policy has no control at a reachable node");
            u_begin = static_cast<std::size_t>(fixed);
            u_end = u_begin + 1;
          }

          for (std::size_t ui = u_begin; ui < u_end; ++ui) {
            const Control& u = controls[ui];
            sys.stage_constraint_into(n, x, u, g);
            for (std::size_t wi = 0; wi < omega.size(); ++wi) {
              sys.step_into(n, x, u, omega[wi], succ);
              grid.stencil_into(succ, p.interp(), stencils[wi]);
              for (const auto& e : stencils[wi].entries()) {
                if (!next_mask[e.node]) {
                  throw UnpopulatedNodeError("stage " + std::to_string(n + 1) +
                                             " table read at unpopulated node " +
                                             std::to_string(e.node));
                }
              }
            }
            for (std::size_t t = 0; t < T; ++t) {
              double inner = std::numeric_limits<double>::infinity();
              for (std::size_t wi = 0; wi < omega.size(); ++wi) {
                inner = std::min(inner, apply_stencil(stencils[wi], next[t], sentinels[t]));
              }
              const double val = std::min(inner, objectives[t].stage_reward(g));
              if (arg[t] < 0 || val > best[t]) {
                best[t] = val;
                arg[t] = static_cast<std::int32_t>(ui);
              }
            }
          }

          for (std::size_t t = 0; t < T; ++t) {
            cur[t][node] = best[t];
            if (options.keep_policy) out[t].policy.control_index[n][node] = arg[t];
          }
        } catch (...) {
#pragma omp critical(rst_dp_failure)
          if (!failure) failure = std::current_exception();
        }
      }
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t t = 0; t < T; ++t) {
      if (options.keep_tables) tables[t][n] = snapshot(cur[t], reach, n, objectives[t]);
      std::swap(cur[t], next[t]);
      std::fill(cur[t].begin(), cur[t].end(), kNaN);
    }
  }

  // `next` now holds stage 0.
  const Stencil root = grid.stencil(p.initial_state(), p.interp());
  for (const auto& e : root.entries()) {
    if (!reach.contains(0, e.node)) throw UnpopulatedNodeError("stage 0 table misses the initial state");
  }
  for (std::size_t t = 0; t < T; ++t) {
    out[t].root_value = apply_stencil(root, next[t], sentinels[t]);
    if (options.keep_tables) out[t].tables = std::move(tables[t]);
  }
  return out;
}

Solution solve(const Problem& problem, const Objective& objective, const SolveOptions& options) {
  return std::move(solve(problem, std::span<const Objective>(&objective, 1), options).front());
}

Solution backward_recursion(const Problem& problem, const ThresholdVector& c) {
  return solve(problem, Objective::level_set(c), SolveOptions{.keep_tables = true, .keep_policy = true});
}

double robust_value(const Problem& problem, std::span<const ValueTable> tables) {
  if (tables.empty()) throw std::invalid_argument("no value tables");
  return interpolate(tables.front(), problem.grid(), problem.initial_state(), problem.interp());
}

double robust_value(const Problem& problem, const ThresholdVector& c) {
  return solve(problem, Objective::level_set(c)).root_value;
}

std::vector<double> robust_values(const Problem& problem, std::span<const ThresholdVector> cs) {
  std::vector<Objective> objs;
  objs.reserve(cs.size());
  for (const auto& c : cs) objs.push_back(Objective::level_set(c));
  const auto sols = solve(problem, objs);
  std::vector<double> out;
  out.reserve(sols.size());
  for (const auto& s : sols) out.push_back(s.root_value);
  return out;
}

bool membership(const Problem& problem, const ThresholdVector& c, double tol) {
  if (!(tol >= 0)) throw std::invalid_argument("membership tolerance must be >= 0");
  return robust_value(problem, c) >= -tol;
}

void write_value_tables_csv(std::ostream& os, const Problem& problem,
                            std::span<const ValueTable> tables) {
  CsvWriter csv(os);
  std::vector<std::string> cols{"stage", "node"};
  for (std::size_t d = 0; d < problem.grid().dim(); ++d) cols.push_back("x_" + std::to_string(d + 1));
  cols.emplace_back("value");
  csv.header(cols);
  for (const auto& table : tables) {
    for (std::size_t node = 0; node < table.values.size(); ++node) {
      if (!table.has(node)) continue;
      std::vector<std::string> cells{std::to_string(table.stage), std::to_string(node)};
      for (double v : problem.grid().coordinate(node)) cells.push_back(format_double(v));
      cells.push_back(format_double(table.values[node]));
      csv.row(cells);
    }
  }
}

}  // namespace rst::dp
