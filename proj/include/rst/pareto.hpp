#pragma once

// Fronts of the threshold set S(xi): the weak front by diagonal projection
// of an outside mesh onto the zero level set of W(xi, .), strong maxima by
// iterating constrained maximin problems one component at a time.

#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "rst/dp.hpp"
#include "rst/mesh.hpp"
#include "rst/model.hpp"

namespace rst::pareto {

/// c is not in S(xi) at the current discretization.
class InfeasibleThreshold : public std::runtime_error {
 public:
  InfeasibleThreshold(const std::string& what, double value)
      : std::runtime_error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

struct FrontPoint {
  ThresholdVector source;  // mesh point c
  double source_value;     // W(xi, c) < 0
  ThresholdVector point;   // p(c) = c + W(xi, c) * 1
  double point_value;      // W(xi, p(c)), recomputed
  std::size_t axis;        // swept axis of the source
};

struct SkippedPoint {
  ThresholdVector source;
  double value;  // W(xi, c) >= 0: mesh point was not outside S(xi)
};

struct FrontResult {
  std::vector<FrontPoint> points;
  std::vector<SkippedPoint> skipped;
  double front_tol = 0.0;

  /// c in S(xi) iff c <= p componentwise for some stored p.
  bool contains(const ThresholdVector& c) const;
  /// Points with |W(xi, p(c))| > front_tol.
  std::size_t violations() const;
  double max_abs_point_value() const;
};

/// c + w * 1. Requires w <= 0 (w = 0 returns c).
ThresholdVector project_to_weak_front(const ThresholdVector& c, double w);
/// Computes W(xi, c) first; throws std::invalid_argument when c lies strictly
/// inside S(xi).
ThresholdVector project_to_weak_front(const dp::Problem& problem, const ThresholdVector& c);

struct WeakFrontOptions {
  double front_tol = 0.0;
};

/// One projected point per mesh point with W < 0, all thresholds solved in one
/// batched pass, then every projection revalidated in a second pass.
FrontResult weak_front(const dp::Problem& problem, const ThresholdRayMesh& mesh,
                       const WeakFrontOptions& options = {});

bool reconstruct_set(const FrontResult& front, const ThresholdVector& query);

struct ConstrainedValue {
  double value;  // v^i_xi(c), or the sentinel when infeasible
  bool feasible;
  dp::FeedbackPolicy policy;
};

/// max over policies of the worst-case min over time of the i-th component,
/// subject to every constraint holding at level c.
ConstrainedValue constrained_maximin_value(const dp::Problem& problem, std::size_t i,
                                           const ThresholdVector& c,
                                           double neg_inf = dp::kDefaultNegInf);

/// Gamma(policy): per component, closed-loop worst case of the min over time
/// of g_j and theta_j along the policy. Throws std::logic_error on a policy gap.
ThresholdVector threshold_of_policy(const dp::Problem& problem, const dp::FeedbackPolicy& policy);

struct StrongChain {
  std::vector<std::size_t> permutation;  // sigma, 0-based component indices
  std::vector<ThresholdVector> chain;    // c^0 .. c^m
  std::vector<double> values;            // v^{sigma(i)}(c^{i-1}), i = 1..m
  std::vector<dp::FeedbackPolicy> policies;

  /// max over i, j of c^{i-1}_j - c^i_j (<= 0 for a monotone chain).
  double monotone_violation() const;
  /// max over i and j >= i of |v^{sigma(i)}(c^{i-1}) - c^j_{sigma(i)}|.
  double identity_residual() const;
  bool monotone(double tol) const { return monotone_violation() <= tol; }
  const ThresholdVector& endpoint() const { return chain.back(); }
};

struct StrongOptions {
  double membership_tol = 0.0;
  double neg_inf = dp::kDefaultNegInf;
};

/// c^i = Gamma(optimal policy of v^{sigma(i)}(c^{i-1})), i = 1..m.
/// Throws InfeasibleThreshold when c0 is not in S(xi) or a step turns infeasible.
StrongChain strong_pareto_point(const dp::Problem& problem, const ThresholdVector& c0,
                                const std::vector<std::size_t>& permutation,
                                const StrongOptions& options = {});

/// Every permutation of 0..m-1 in lexicographic order.
std::vector<std::vector<std::size_t>> all_permutations(std::size_t m);

/// Columns c_1..c_m, W, p_1..p_m, W_p, axis.
void write_front_csv(std::ostream& os, const FrontResult& front);
/// Columns i, sigma_i, c_1..c_m, v (row 0 leaves sigma_i and v empty).
void write_chain_csv(std::ostream& os, const StrongChain& chain);

}  // namespace rst::pareto
