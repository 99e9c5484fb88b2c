#include <doctest.h>

#include <random>
#include <sstream>

#include "rst/oracle.hpp"
#include "rst/pareto.hpp"
#include "test_support.hpp"

using namespace rst;

namespace {

// One state, one control, constant g = (a, b), theta large.
testing::TabularInstance constant_instance(double a, double b, std::size_t horizon) {
  tabular::TabularTables t;
  t.states = 2;
  t.controls = 1;
  t.scenarios = 2;
  t.threshold_dim = 2;
  t.horizon = horizon;
  t.next.assign(horizon + 1, {{{0, 0}}, {{1, 1}}});
  t.g.assign(horizon + 1, {{{a, b}}, {{a, b}}});
  t.theta = {{100.0, 100.0}, {100.0, 100.0}};
  return testing::make_instance(t, 0);
}

// Two controls trading off the components: u=0 gives (8, 2), u=1 gives (3, 6).
testing::TabularInstance tradeoff_instance() {
  tabular::TabularTables t;
  t.states = 3;
  t.controls = 2;
  t.scenarios = 2;
  t.threshold_dim = 2;
  t.horizon = 1;
  // From 0: u=0 -> 1, u=1 -> 2; states 1 and 2 are absorbing.
  const std::vector<std::vector<std::vector<std::size_t>>> next{
      {{1, 1}, {2, 2}}, {{1, 1}, {1, 1}}, {{2, 2}, {2, 2}}};
  t.next = {next, next};
  const std::vector<std::vector<std::vector<double>>> g{
      {{9, 9}, {9, 9}}, {{8, 2}, {8, 2}}, {{3, 6}, {3, 6}}};
  t.g = {g, g};
  t.theta = {{9, 9}, {8, 2}, {3, 6}};
  return testing::make_instance(t, 0);
}

}  // namespace

TEST_CASE("projection arithmetic") {
  CHECK(pareto::project_to_weak_front(ThresholdVector{10.0, 10.0}, -3.0) == ThresholdVector{7.0, 7.0});
  CHECK(pareto::project_to_weak_front(ThresholdVector{1.5, 2.0}, 0.0) == ThresholdVector{1.5, 2.0});
  CHECK_THROWS_AS(pareto::project_to_weak_front(ThresholdVector{1.0, 1.0}, 0.5), std::invalid_argument);
}

TEST_CASE("projected tabular points lie exactly on the zero level set") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = testing::random_instance(rng);
    for (int q = 0; q < 10; ++q) {
      const auto c = testing::random_threshold(rng, 2, 4.0, 14.0);
      const double w = dp::robust_value(*inst.problem, c);
      if (w >= 0) continue;
      const auto p = pareto::project_to_weak_front(*inst.problem, c);
      const double wp = dp::robust_value(*inst.problem, p);
      CHECK(std::abs(wp) <= 1e-12);
      if (wp <= 0) {
        const auto again = pareto::project_to_weak_front(p, wp);
        for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(again[j] - p[j]) <= 1e-12);
      }
    }
  }
}

TEST_CASE("weak front on tabular systems") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    const auto inst = testing::random_instance(rng);
    const ThresholdRayMesh mesh(0.25, 48, {12.0, 12.0});
    const auto front = pareto::weak_front(*inst.problem, mesh, {1e-12});
    CHECK(front.skipped.empty());
    CHECK(front.points.size() == mesh.points().size());
    CHECK(front.violations() == 0);

    for (std::size_t i = 1; i < front.points.size(); ++i) {
      const auto& a = front.points[i - 1];
      const auto& b = front.points[i];
      if (a.axis != b.axis) continue;
      CHECK(b.point[a.axis] >= a.point[a.axis] - 1e-12);
    }
    for (const auto& p : front.points) {
      CHECK(pareto::reconstruct_set(front, p.point));
      CHECK_FALSE(pareto::reconstruct_set(front, p.point.shifted(1e-6)));
    }
    for (int q = 0; q < 200; ++q) {
      const auto c = testing::random_threshold(rng, 2);
      const double w = dp::robust_value(*inst.problem, c);
      if (std::abs(w) <= mesh.spacing()) continue;
      CHECK(pareto::reconstruct_set(front, c) == (w >= 0));
    }
  }
}

TEST_CASE("anchors inside the set are skipped") {
  const auto inst = constant_instance(5, 5, 2);
  const auto front = pareto::weak_front(*inst.problem, ThresholdRayMesh(1.0, 8, {4.0, 9.0}), {1e-12});
  CHECK_FALSE(front.skipped.empty());
  for (const auto& s : front.skipped) CHECK(s.value >= 0);
  CHECK_THROWS_AS(pareto::reconstruct_set(pareto::FrontResult{}, ThresholdVector{0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("constrained maximin value") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = testing::random_instance(rng);
    for (int q = 0; q < 10; ++q) {
      const auto c = testing::random_threshold(rng, 2, -1.0, 6.0);
      const std::size_t i = q % 2;
      const auto cv = pareto::constrained_maximin_value(*inst.problem, i, c);
      const double tree = oracle::closedloop_game(inst.sys(), inst.controls(), inst.xi(),
                                                  dp::Objective::constrained(c, i));
      CHECK(cv.value == tree);
      CHECK(cv.feasible == dp::membership(*inst.problem, c));
      if (cv.feasible) CHECK(cv.value >= c[i]);
    }
  }
  const auto inst = tradeoff_instance();
  const auto strict = pareto::constrained_maximin_value(*inst.problem, 0, ThresholdVector{2.0, 1.0});
  CHECK(strict.value == 8.0);
  const auto extremal = pareto::constrained_maximin_value(*inst.problem, 0, ThresholdVector{8.0, 2.0});
  CHECK(extremal.value == 8.0);
  const auto none = pareto::constrained_maximin_value(*inst.problem, 0, ThresholdVector{8.0, 6.0});
  CHECK_FALSE(none.feasible);
}

TEST_CASE("threshold of a policy") {
  const auto flat = constant_instance(4.0, 7.0, 3);
  const auto cv = pareto::constrained_maximin_value(*flat.problem, 0, ThresholdVector{0.0, 0.0});
  CHECK(pareto::threshold_of_policy(*flat.problem, cv.policy) == ThresholdVector{4.0, 7.0});

  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = testing::random_instance(rng);
    const auto c = ThresholdVector{-1.0, -1.0};
    const auto pol = pareto::constrained_maximin_value(*inst.problem, trial % 2, c).policy;
    const auto gamma = pareto::threshold_of_policy(*inst.problem, pol);
    const auto x0 = static_cast<std::size_t>(inst.xi()[0]);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(gamma[j] == testing::policy_component_value(inst.tables, pol, j, 0, x0));
    }
    CHECK(dp::membership(*inst.problem, gamma));
  }

  dp::FeedbackPolicy gap = cv.policy;
  gap.control_index[1].assign(gap.control_index[1].size(), -1);
  CHECK_THROWS_AS(pareto::threshold_of_policy(*flat.problem, gap), std::logic_error);
}

TEST_CASE("strong Pareto chains") {
  const auto inst = tradeoff_instance();
  const auto first = pareto::strong_pareto_point(*inst.problem, ThresholdVector{0.0, 0.0}, {0, 1});
  CHECK(first.endpoint() == ThresholdVector{8.0, 2.0});
  const auto second = pareto::strong_pareto_point(*inst.problem, ThresholdVector{0.0, 0.0}, {1, 0});
  CHECK(second.endpoint() == ThresholdVector{3.0, 6.0});
  for (const auto* ch : {&first, &second}) {
    CHECK(ch->monotone(0.0));
    CHECK(ch->identity_residual() == 0.0);
    CHECK(ch->chain.size() == 3);
  }

  // Starting on the strong front leaves the chain constant.
  const auto fixed = pareto::strong_pareto_point(*inst.problem, ThresholdVector{8.0, 2.0}, {1, 0});
  for (const auto& c : fixed.chain) CHECK(c == ThresholdVector{8.0, 2.0});

  CHECK_THROWS_AS(pareto::strong_pareto_point(*inst.problem, ThresholdVector{9.0, 9.0}, {0, 1}),
                  pareto::InfeasibleThreshold);
  CHECK_THROWS_AS(pareto::strong_pareto_point(*inst.problem, ThresholdVector{0.0, 0.0}, {0, 0}),
                  std::invalid_argument);
}

TEST_CASE("scalar strong chain is a line search maximum") {
  std::mt19937_64 rng(37);
  testing::TabularShape scalar;
  scalar.m = 1;
  for (int trial = 0; trial < 15; ++trial) {
    const auto inst = testing::random_instance(rng, scalar);
    const auto chain = pareto::strong_pareto_point(*inst.problem, ThresholdVector{-1.0}, {0});
    const double top = chain.endpoint()[0];
    CHECK(top == chain.values[0]);
    CHECK(dp::membership(*inst.problem, ThresholdVector{top}));
    for (double c = top + 0.25; c <= 11; c += 0.25) CHECK_FALSE(dp::membership(*inst.problem, ThresholdVector{c}));
  }
}

TEST_CASE("permutations") {
  CHECK(pareto::all_permutations(1).size() == 1);
  CHECK(pareto::all_permutations(2) == std::vector<std::vector<std::size_t>>{{0, 1}, {1, 0}});
  CHECK(pareto::all_permutations(3).size() == 6);
}

TEST_CASE("csv writers") {
  const auto inst = tradeoff_instance();
  const auto front = pareto::weak_front(*inst.problem, ThresholdRayMesh(1.0, 2, {12.0, 12.0}), {1e-12});
  std::ostringstream os;
  pareto::write_front_csv(os, front);
  CHECK(os.str().rfind("c_1,c_2,W,p_1,p_2,W_p,axis\n", 0) == 0);
  const auto chain = pareto::strong_pareto_point(*inst.problem, ThresholdVector{0.0, 0.0}, {1, 0});
  std::ostringstream cs;
  pareto::write_chain_csv(cs, chain);
  CHECK(cs.str() == "i,sigma_i,c_1,c_2,v\n0,,0,0,\n1,2,3,6,6\n2,1,3,6,3\n");
}
