#include <doctest.h>

#include <algorithm>
#include <random>

#include "rst/fishery.hpp"
#include "rst/mesh.hpp"
#include "test_support.hpp"

using namespace rst;

TEST_CASE("ray mesh enumeration") {
  const auto pts = threshold_ray_mesh(1.0, 2, {10.0, 10.0});
  const std::vector<ThresholdVector> want{{0, 10}, {1, 10}, {2, 10}, {10, 0}, {10, 1}, {10, 2}};
  CHECK(pts == want);
  CHECK(threshold_ray_mesh(1.0, 0, {10.0, 10.0}) == std::vector<ThresholdVector>{{0, 10}, {10, 0}});
  CHECK(threshold_ray_mesh(0.5, 7, {3.0, 4.0, 5.0}).size() == 3 * 8);
  // (2, 2) appears on both sweeps once the anchors fall on the mesh.
  CHECK(threshold_ray_mesh(1.0, 3, {2.0, 2.0}).size() == 2 * 4 - 1);
  CHECK_THROWS_AS(threshold_ray_mesh(0.0, 3, {2.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(threshold_ray_mesh(-1.0, 3, {2.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(threshold_ray_mesh(1.0, 3, {2.0, 0.0}), std::invalid_argument);
}

TEST_CASE("grid geometry") {
  const StateGrid g({{0.0, 120.0, 600}});
  CHECK(g.size() == 600);
  CHECK(g.coordinate(0)[0] == 0.0);
  CHECK(g.coordinate(599)[0] == 120.0);
  CHECK(g.spacing(0) == doctest::Approx(120.0 / 599));
  CHECK_THROWS_AS(StateGrid({{1.0, 1.0, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(StateGrid({{0.0, 1.0, 1}}), std::invalid_argument);
  const StateGrid g2({{0.0, 1.0, 3}, {-1.0, 1.0, 5}});
  CHECK(g2.size() == 15);
  CHECK(g2.coordinate(7) == State{0.5, 0.0});
}

TEST_CASE("interpolation") {
  const StateGrid g({{0.0, 4.0, 5}});
  ValueTable t;
  t.values = {0.0, 1.0, 4.0, 9.0, 16.0};
  t.populated.assign(5, 1);

  SUBCASE("on a node") {
    for (std::size_t i = 0; i < 5; ++i) {
      CHECK(interpolate(t, g, g.coordinate(i), InterpMode::multilinear) == t.values[i]);
      CHECK(interpolate(t, g, g.coordinate(i), InterpMode::nearest) == t.values[i]);
    }
  }
  SUBCASE("midway") {
    CHECK(interpolate(t, g, State{0.5}, InterpMode::multilinear) == 0.5);
    CHECK(interpolate(t, g, State{2.5}, InterpMode::multilinear) == 6.5);
    CHECK(interpolate(t, g, State{2.4}, InterpMode::nearest) == 4.0);
    CHECK(interpolate(t, g, State{2.6}, InterpMode::nearest) == 9.0);
  }
  SUBCASE("clamped outside the box") {
    CHECK(interpolate(t, g, State{-3.0}, InterpMode::multilinear) == 0.0);
    CHECK(interpolate(t, g, State{7.0}, InterpMode::multilinear) == 16.0);
    CHECK(interpolate(t, g, State{7.0}, InterpMode::nearest) == 16.0);
  }
  SUBCASE("unpopulated read is a distinct error") {
    t.populated[3] = 0;
    CHECK_THROWS_AS(interpolate(t, g, State{2.5}, InterpMode::multilinear), UnpopulatedNodeError);
    CHECK(interpolate(t, g, State{2.0}, InterpMode::multilinear) == 4.0);
  }
  SUBCASE("sentinel is sticky") {
    t.values[3] = -1e9;
    CHECK(interpolate(t, g, State{2.5}, InterpMode::multilinear, -1e9) == -1e9);
    CHECK(interpolate(t, g, State{1.5}, InterpMode::multilinear, -1e9) == 2.5);
  }
}

TEST_CASE("interpolation is monotone and bounded (2-D)") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5, 5);
  const StateGrid g({{0.0, 1.0, 4}, {0.0, 2.0, 3}});
  ValueTable a, b;
  a.populated.assign(g.size(), 1);
  b.populated = a.populated;
  for (std::size_t i = 0; i < g.size(); ++i) {
    a.values.push_back(u(rng));
    b.values.push_back(a.values.back() + std::abs(u(rng)));
  }
  const double lo = *std::min_element(a.values.begin(), a.values.end());
  const double hi = *std::max_element(a.values.begin(), a.values.end());
  std::uniform_real_distribution<double> px(-0.2, 1.2), py(-0.2, 2.2);
  for (int k = 0; k < 500; ++k) {
    const State x{px(rng), py(rng)};
    const double va = interpolate(a, g, x, InterpMode::multilinear);
    CHECK(va <= interpolate(b, g, x, InterpMode::multilinear));
    CHECK(va >= lo);
    CHECK(va <= hi);
  }
}

TEST_CASE("reachable sets") {
  SUBCASE("N = 0 gives the corners around xi") {
    const auto sys = std::make_shared<SystemSpec>(
        fishery::build_fishery_system(fishery::FisheryParams{}, 0));
    const StateGrid g({{0.0, 120.0, 601}});
    const auto r = build_reachable_sets(State{30.1}, g, *sys, ControlMesh::uniform(0, 40, 5),
                                        InterpMode::multilinear);
    CHECK(r.nodes(0) == std::vector<std::size_t>{150, 151});
    CHECK_THROWS_AS(build_reachable_sets(State{130.0}, g, *sys, ControlMesh::uniform(0, 40, 5),
                                         InterpMode::multilinear),
                    std::invalid_argument);
  }
  SUBCASE("carrying capacity is a fixed point") {
    fishery::FisheryParams params;
    params.active = {fishery::kScenarioB};
    const auto sys = fishery::build_fishery_system(params, 6);
    const StateGrid g({{0.0, 120.0, 601}});
    const auto r = build_reachable_sets(State{50.0}, g, sys, ControlMesh(std::vector<Control>{{0.0}}), InterpMode::multilinear);
    for (std::size_t n = 0; n < r.stages(); ++n) CHECK(r.nodes(n) == std::vector<std::size_t>{250});
  }
  SUBCASE("tabular systems match breadth-first search") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
      const auto inst = testing::random_instance(rng);
      const auto bfs = testing::bfs_reachable(inst.tables, static_cast<std::size_t>(inst.xi()[0]));
      const auto& r = inst.problem->reach();
      REQUIRE(r.stages() == bfs.size());
      for (std::size_t n = 0; n < r.stages(); ++n) CHECK(r.nodes(n) == bfs[n]);
      CHECK_FALSE(r.over_approximate());
    }
  }
}

TEST_CASE("control mesh") {
  const auto m = ControlMesh::uniform(0.0, 40.0, 200);
  CHECK(m.size() == 200);
  CHECK(m[0][0] == 0.0);
  CHECK(m[199][0] == 40.0);
  const auto sys = fishery::build_fishery_system(fishery::FisheryParams{}, 1);
  CHECK_NOTHROW(m.check_inside(sys));
  CHECK_THROWS_AS(ControlMesh::uniform(0.0, 41.0, 3).check_inside(sys), std::invalid_argument);
  CHECK_THROWS_AS(ControlMesh(std::vector<Control>{}), std::invalid_argument);
}

TEST_CASE("interp mode names") {
  CHECK(parse_interp_mode("nearest") == InterpMode::nearest);
  CHECK(std::string(to_string(InterpMode::multilinear)) == "multilinear");
  CHECK_THROWS_AS(parse_interp_mode("cubic"), std::invalid_argument);
}
