#include "rst/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rst/csv.hpp"

namespace rst::pareto {

bool FrontResult::contains(const ThresholdVector& c) const {
  return std::any_of(points.begin(), points.end(),
                     [&](const FrontPoint& p) { return componentwise_leq(c, p.point); });
}

std::size_t FrontResult::violations() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [&](const FrontPoint& p) {
    return !(std::abs(p.point_value) <= front_tol);
  }));
}

double FrontResult::max_abs_point_value() const {
  double v = 0.0;
  for (const auto& p : points) v = std::max(v, std::abs(p.point_value));
  return v;
}

ThresholdVector project_to_weak_front(const ThresholdVector& c, double w) {
  if (!(w <= 0)) {
    throw std::invalid_argument("projection needs W(xi, c) <= 0, got " + format_double(w) +
                                " at c = " + to_string(c));
  }
  return c.shifted(w);
}

ThresholdVector project_to_weak_front(const dp::Problem& problem, const ThresholdVector& c) {
  return project_to_weak_front(c, dp::robust_value(problem, c));
}

FrontResult weak_front(const dp::Problem& problem, const ThresholdRayMesh& mesh,
                       const WeakFrontOptions& options) {
  const auto& sources = mesh.points();
  if (sources.empty()) throw std::invalid_argument("threshold mesh is empty");
  if (!(options.front_tol >= 0)) throw std::invalid_argument("front_tol must be >= 0");

  FrontResult out;
  out.front_tol = options.front_tol;
  const std::vector<double> w = dp::robust_values(problem, sources);

  std::vector<ThresholdVector> projected;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (!(w[i] < 0)) {
      out.skipped.push_back({sources[i], w[i]});
      continue;
    }
    projected.push_back(project_to_weak_front(sources[i], w[i]));
    kept.push_back(i);
  }

  const std::vector<double> wp = dp::robust_values(problem, projected);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const std::size_t i = kept[k];
    out.points.push_back({sources[i], w[i], projected[k], wp[k], mesh.axis_of(i)});
  }
  return out;
}

bool reconstruct_set(const FrontResult& front, const ThresholdVector& query) {
  if (front.points.empty()) throw std::invalid_argument("front is empty");
  return front.contains(query);
}

ConstrainedValue constrained_maximin_value(const dp::Problem& problem, std::size_t i,
                                           const ThresholdVector& c, double neg_inf) {
  auto sol = dp::solve(problem, dp::Objective::constrained(c, i, neg_inf),
                       dp::SolveOptions{.keep_policy = true});
  return {sol.root_value, sol.root_value > neg_inf, std::move(sol.policy)};
}

ThresholdVector threshold_of_policy(const dp::Problem& problem, const dp::FeedbackPolicy& policy) {
  const std::size_t m = problem.system().threshold_dim();
  std::vector<dp::Objective> objs;
  for (std::size_t j = 0; j < m; ++j) objs.push_back(dp::Objective::component(j));
  const auto sols = dp::solve(problem, objs, dp::SolveOptions{.fixed_policy = &policy});
  std::vector<double> gamma;
  for (const auto& s : sols) gamma.push_back(s.root_value);
  return ThresholdVector(std::move(gamma));
}

double StrongChain::monotone_violation() const {
  double v = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < chain.size(); ++i) {
    for (std::size_t j = 0; j < chain[i].size(); ++j) v = std::max(v, chain[i - 1][j] - chain[i][j]);
  }
  return v;
}

double StrongChain::identity_residual() const {
  double r = 0.0;
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const std::size_t comp = permutation[i - 1];
    for (std::size_t j = i; j < chain.size(); ++j) {
      r = std::max(r, std::abs(values[i - 1] - chain[j][comp]));
    }
  }
  return r;
}

StrongChain strong_pareto_point(const dp::Problem& problem, const ThresholdVector& c0,
                                const std::vector<std::size_t>& permutation,
                                const StrongOptions& options) {
  const std::size_t m = problem.system().threshold_dim();
  if (c0.size() != m) throw std::invalid_argument("c0 dimension differs from the system's m");
  std::vector<std::size_t> sorted = permutation;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> iota(m);
  std::iota(iota.begin(), iota.end(), std::size_t{0});
  if (sorted != iota) throw std::invalid_argument("sigma must be a permutation of the components");

  const double w0 = dp::robust_value(problem, c0);
  if (!(w0 >= -options.membership_tol)) {
    throw InfeasibleThreshold("c0 = " + to_string(c0) + " is not sustainable: W = " +
                                  format_double(w0),
                              w0);
  }

  StrongChain out;
  out.permutation = permutation;
  out.chain.push_back(c0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t comp = permutation[i];
    auto cv = constrained_maximin_value(problem, comp, out.chain.back(), options.neg_inf);
    if (!cv.feasible) {
      throw InfeasibleThreshold("constrained problem for component " + std::to_string(comp + 1) +
                                    " is infeasible at c = " + to_string(out.chain.back()),
                                cv.value);
    }
    out.values.push_back(cv.value);
    out.chain.push_back(threshold_of_policy(problem, cv.policy));
    out.policies.push_back(std::move(cv.policy));
  }
  return out;
}

std::vector<std::vector<std::size_t>> all_permutations(std::size_t m) {
  std::vector<std::size_t> p(m);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

void write_front_csv(std::ostream& os, const FrontResult& front) {
  CsvWriter csv(os);
  const std::size_t m = front.points.empty() ? 0 : front.points.front().source.size();
  std::vector<std::string> cols;
  for (std::size_t j = 0; j < m; ++j) cols.push_back("c_" + std::to_string(j + 1));
  cols.emplace_back("W");
  for (std::size_t j = 0; j < m; ++j) cols.push_back("p_" + std::to_string(j + 1));
  cols.emplace_back("W_p");
  cols.emplace_back("axis");
  csv.header(cols);
  for (const auto& p : front.points) {
    std::vector<std::string> cells;
    for (double v : p.source.values()) cells.push_back(format_double(v));
    cells.push_back(format_double(p.source_value));
    for (double v : p.point.values()) cells.push_back(format_double(v));
    cells.push_back(format_double(p.point_value));
    cells.push_back(std::to_string(p.axis + 1));
    csv.row(cells);
  }
}

void write_chain_csv(std::ostream& os, const StrongChain& chain) {
  CsvWriter csv(os);
  const std::size_t m = chain.chain.front().size();
  std::vector<std::string> cols{"i", "sigma_i"};
  for (std::size_t j = 0; j < m; ++j) cols.push_back("c_" + std::to_string(j + 1));
  cols.emplace_back("v");
  csv.header(cols);
  for (std::size_t i = 0; i < chain.chain.size(); ++i) {
    std::vector<std::string> cells{std::to_string(i),
                                   i == 0 ? "" : std::to_string(chain.permutation[i - 1] + 1)};
    for (double v : chain.chain[i].values()) cells.push_back(format_double(v));
    cells.push_back(i == 0 ? "" : format_double(chain.values[i - 1]));
    csv.row(cells);
  }
}

}  // namespace rst::pareto
