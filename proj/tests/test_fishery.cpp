#include <doctest.h>

#include <cmath>

#include "rst/dp.hpp"
#include "rst/fishery.hpp"

using namespace rst;
using namespace rst::fishery;

namespace {
const GrowthScenario kA{0.39, 90.0};
const GrowthScenario kB{2.0, 50.0};
}  // namespace

TEST_CASE("Beverton-Holt recruitment") {
  CHECK(beverton_holt(0.0, kA) == 0.0);
  CHECK(beverton_holt(90.0, kA) == doctest::Approx(90.0));
  CHECK(beverton_holt(50.0, kB) == 50.0);
  CHECK(beverton_holt(25.0, kB) == 37.5);
  CHECK_THROWS_AS(beverton_holt(-1.0, kA), std::domain_error);
}

TEST_CASE("surplus and MSY") {
  CHECK(surplus(0.0, kB) == 0.0);
  CHECK(surplus(50.0, kB) == 0.0);
  CHECK(surplus(25.0, kB) == 12.5);
  CHECK(x_msy(kB) == doctest::Approx(18.301).epsilon(1e-4));
  CHECK(x_msy(kA) == doctest::Approx(41.30).epsilon(1e-3));
  CHECK(msy(kB) == doctest::Approx(13.40).epsilon(1e-3));
  CHECK(msy(kA) == doctest::Approx(7.39).epsilon(1e-3));
  for (const auto& s : {kA, kB}) {
    CHECK(msy(s) == doctest::Approx(surplus(x_msy(s), s)).epsilon(1e-12));
    const double h = 1e-4;
    const double slope = (surplus(x_msy(s) + h, s) - surplus(x_msy(s) - h, s)) / (2 * h);
    CHECK(std::abs(slope) < 1e-6);
    for (double eps : {1e-3, 0.1, 1.0}) {
      CHECK(surplus(x_msy(s) + eps, s) <= surplus(x_msy(s), s));
      CHECK(surplus(x_msy(s) - eps, s) <= surplus(x_msy(s), s));
    }
  }
}

TEST_CASE("shape of f and sigma on a grid scan") {
  for (const auto& s : {kA, kB}) {
    double prev_f = beverton_holt(0.0, s);
    double prev_slope = INFINITY;
    int sign_changes = 0;
    double prev_dsig = surplus(0.01, s) - surplus(0.0, s);
    for (double x = 0.01; x <= s.K; x += 0.01) {
      const double f = beverton_holt(x, s);
      CHECK(f > prev_f);
      const double slope = (f - prev_f) / 0.01;
      CHECK(slope <= prev_slope + 1e-9);
      prev_slope = slope;
      prev_f = f;
      CHECK(surplus(x, s) >= -1e-12);
      const double dsig = surplus(x + 0.01, s) - surplus(x, s);
      if ((dsig > 0) != (prev_dsig > 0)) ++sign_changes;
      prev_dsig = dsig;
    }
    CHECK(sign_changes == 1);
  }
}

TEST_CASE("analytic deterministic sets") {
  CHECK(analytic_det_set_membership(60.0, kA, ThresholdVector{0.0, 0.0}));
  for (const auto& s : {kA, kB}) {
    CHECK(analytic_det_set_membership(60.0, s, ThresholdVector{x_msy(s), surplus(x_msy(s), s)}));
    CHECK_FALSE(analytic_det_set_membership(60.0, s, ThresholdVector{x_msy(s), msy(s) + 1e-9}));
  }
  CHECK_FALSE(analytic_det_set_membership(100.0, kB, ThresholdVector{51.0, 0.0}));
  CHECK_FALSE(analytic_det_set_membership(100.0, kA, ThresholdVector{91.0, 0.0}));
  CHECK_FALSE(analytic_det_set_membership(10.0, kA, ThresholdVector{11.0, 0.0}));
}

TEST_CASE("analytic intersection") {
  const FisheryParams params;
  CHECK(analytic_intersection_membership(60.0, params, ThresholdVector{0.0, 0.0}));
  CHECK_FALSE(analytic_intersection_membership(100.0, params, ThresholdVector{60.0, 0.0}));
  for (double x = 0.5; x <= 50.0; x += 0.5) {
    const double h = min_surplus(x, params);
    CHECK(h == std::min(surplus(x, kA), surplus(x, kB)));
    CHECK(analytic_intersection_membership(60.0, params, ThresholdVector{x, h}));
    CHECK_FALSE(analytic_intersection_membership(60.0, params, ThresholdVector{x, h + 1e-9}));
  }
}

TEST_CASE("fishery system") {
  const FisheryParams params;
  const auto sys = build_fishery_system(params, 4);
  CHECK(sys.name() == "fishery-beverton-holt");
  CHECK(sys.step(0, State{50.0}, Control{0.0}, kScenarioB)[0] == 50.0);
  for (double x = 1.0; x < 50.0; x += 3.7) {
    CHECK(sys.step(1, State{x}, Control{surplus(x, kA)}, kScenarioA)[0] == doctest::Approx(x));
    CHECK(sys.step(2, State{x}, Control{surplus(x, kB)}, kScenarioB)[0] == doctest::Approx(x));
  }
  FisheryParams bad;
  bad.scenarios[0].r = 0.0;
  CHECK_THROWS_AS(build_fishery_system(bad, 3), std::invalid_argument);
  FisheryParams low;
  low.m_big = 10.0;
  CHECK_THROWS_AS(build_fishery_system(low, 3), std::invalid_argument);
}

TEST_CASE("robust membership implies membership under each constant scenario") {
  auto sys = std::make_shared<const SystemSpec>(build_fishery_system(FisheryParams{}, 15));
  const dp::Problem robust(sys, StateGrid({{0.0, 120.0, 241}}), ControlMesh::uniform(0, 40, 41), State{60.0});
  const dp::Problem only_a = robust.with_system(
      std::make_shared<const SystemSpec>(sys->with_constant_scenario(kScenarioA)));
  const dp::Problem only_b = robust.with_system(
      std::make_shared<const SystemSpec>(sys->with_constant_scenario(kScenarioB)));
  std::vector<ThresholdVector> cs;
  for (double x = 2.5; x <= 60; x += 5)
    for (double h = 0.5; h <= 12; h += 1.5) cs.push_back(ThresholdVector{x, h});
  const auto w = dp::robust_values(robust, cs);
  const auto wa = dp::robust_values(only_a, cs);
  const auto wb = dp::robust_values(only_b, cs);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    CHECK(w[i] <= wa[i]);
    CHECK(w[i] <= wb[i]);
  }
}
