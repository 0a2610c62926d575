#include "doctest.h"

#include "hgr/env.hpp"
#include "hgr/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace hgr;

namespace {

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

} // namespace

TEST_CASE("sparse reward thresholds strictly at the tolerance") {
  CHECK(sparse_reward({0.0, 0.0}, {0.03, 0.0}, 0.05) == 0.0);
  CHECK(sparse_reward({0.0, 0.0}, {0.05, 0.0}, 0.05) == -1.0); // exactly rho
  CHECK(sparse_reward({0.2, -0.4}, {0.2, -0.4}, 0.05) == 0.0); // zero distance
  CHECK(sparse_reward({0.0, 0.0}, {1.0, 1.0}, 0.05) == -1.0);
  CHECK_THROWS_AS(sparse_reward({0.0}, {0.0, 0.0}, 0.05), std::invalid_argument);
}

TEST_CASE("sparse reward is a pure function") {
  const GoalValue a = {0.123, -0.456}, g = {0.1, -0.5};
  const double r0 = sparse_reward(a, g, 0.05);
  for (int i = 0; i < 10; ++i) CHECK(sparse_reward(a, g, 0.05) == r0);
}

TEST_CASE("reset is deterministic in the seed") {
  for (const char* id : {"point-reach", "point-push"}) {
    auto env = make_env(id);
    const auto [s1, g1] = env->reset(99);
    const auto [s2, g2] = env->reset(99);
    CHECK(s1.features == s2.features);
    CHECK(g1 == g2);
    CHECK(s1.timestep == 0);
    const auto [s3, g3] = env->reset(100);
    CHECK(s1.features != s3.features);
  }
}

TEST_CASE("reset is unaffected by prior episodes") {
  auto env = make_env("point-push");
  const auto [s1, g1] = env->reset(7);
  // Run an unrelated episode, then reset with the same seed again.
  auto [s, g] = env->reset(1234);
  for (std::size_t t = 0; t < env->spec().horizon; ++t)
    s = env->step(s, {0.6, -0.4});
  const auto [s2, g2] = env->reset(7);
  CHECK(s1.features == s2.features);
  CHECK(g1 == g2);
}

TEST_CASE("point-reach goals cover the workspace quadrants evenly") {
  auto env = make_env("point-reach");
  int quad[4] = {};
  const int n = 1000;
  for (int i = 0; i < n; ++i) {
    const auto [s, g] = env->reset(5000 + i);
    CHECK(g[0] >= -1.0);
    CHECK(g[0] <= 1.0);
    CHECK(g[1] >= -1.0);
    CHECK(g[1] <= 1.0);
    quad[(g[0] >= 0.0 ? 1 : 0) + (g[1] >= 0.0 ? 2 : 0)]++;
  }
  for (int q = 0; q < 4; ++q) {
    CHECK(quad[q] >= static_cast<int>(n * 0.20));
    CHECK(quad[q] <= static_cast<int>(n * 0.30));
  }
}

TEST_CASE("goal sampling rejects goals already satisfied at reset") {
  for (const char* id : {"point-reach", "point-push"}) {
    auto env = make_env(id);
    for (int i = 0; i < 300; ++i) {
      const auto [s, g] = env->reset(42 + i);
      CHECK(dist(env->achieved_goal(s), g) >= env->spec().tolerance);
    }
  }
}

TEST_CASE("point-reach dynamics: integration, clipping, zero action") {
  auto env = make_env("point-reach");
  EnvState s;
  s.features = {0.0, 0.0};
  s.timestep = 0;

  const EnvState z = env->step(s, {0.0, 0.0});
  CHECK(z.features[0] == 0.0);
  CHECK(z.features[1] == 0.0);
  CHECK(z.timestep == 1);

  const EnvState m = env->step(s, {1.0, 0.0});
  CHECK(m.features[0] == doctest::Approx(0.1));
  CHECK(m.features[1] == 0.0);

  // Out-of-range action behaves like the clipped one.
  const EnvState c = env->step(s, {5.0, -9.0});
  const EnvState c1 = env->step(s, {1.0, -1.0});
  CHECK(c.features == c1.features);

  // Position clamps at the workspace boundary.
  EnvState edge;
  edge.features = {0.95, 0.0};
  edge.timestep = 0;
  const EnvState w = env->step(edge, {1.0, 0.0});
  CHECK(w.features[0] == 1.0);
}

TEST_CASE("stepping past the horizon is rejected") {
  auto env = make_env("point-reach", EnvOptions{.horizon = 3});
  auto [s, g] = env->reset(1);
  for (int t = 0; t < 3; ++t) s = env->step(s, {0.1, 0.1});
  CHECK(s.timestep == 3);
  CHECK_THROWS_AS(env->step(s, {0.1, 0.1}), std::invalid_argument);
}

TEST_CASE("achieved_goal projects the right coordinates") {
  auto reach = make_env("point-reach");
  EnvState rs;
  rs.features = {0.3, -0.7};
  CHECK(reach->achieved_goal(rs) == GoalValue{0.3, -0.7});

  auto push = make_env("point-push");
  EnvState ps;
  ps.features = {0.9, 0.9, -0.2, 0.4}; // agent coords must be ignored
  CHECK(push->achieved_goal(ps) == GoalValue{-0.2, 0.4});
  ps.features = {-0.9, 0.1, -0.2, 0.4};
  CHECK(push->achieved_goal(ps) == GoalValue{-0.2, 0.4});
}

TEST_CASE("point-push: box stays put without contact") {
  auto env = make_env("point-push");
  EnvState s;
  s.features = {-0.8, 0.0, 0.5, 0.0}; // far apart
  s.timestep = 0;
  for (const auto& a : {std::vector<double>{1, 0}, {0, 1}, {-1, -1}, {0.3, -0.9}}) {
    const EnvState n = env->step(s, a);
    CHECK(n.features[2] == 0.5);
    CHECK(n.features[3] == 0.0);
  }
}

TEST_CASE("point-push: aligned contact pushes the box by the approach component") {
  auto env = make_env("point-push"); // contact_radius 0.2
  EnvState s;
  s.features = {-0.15, 0.0, 0.0, 0.0}; // distance 0.15 < 0.2, axis = +x
  s.timestep = 0;
  const EnvState n = env->step(s, {1.0, 0.0});
  CHECK(n.features[2] == doctest::Approx(0.1)); // box moved by full step
  CHECK(n.features[3] == doctest::Approx(0.0));
  CHECK(n.features[0] == doctest::Approx(-0.05)); // agent keeps its motion
  // Separation preserved under straight pushing.
  CHECK(std::hypot(n.features[0] - n.features[2], n.features[1] - n.features[3]) ==
        doctest::Approx(0.15));
}

TEST_CASE("point-push: retreating from contact never drags the box") {
  auto env = make_env("point-push");
  EnvState s;
  s.features = {-0.15, 0.0, 0.0, 0.0};
  s.timestep = 0;
  const EnvState n = env->step(s, {-1.0, 0.0});
  CHECK(n.features[2] == 0.0);
  CHECK(n.features[3] == 0.0);
}

TEST_CASE("trajectory determinism: same seed and actions, same states") {
  for (const char* id : {"point-reach", "point-push"}) {
    auto env = make_env(id);
    Rng arng(2718);
    std::vector<std::vector<double>> actions;
    for (std::size_t t = 0; t < env->spec().horizon; ++t)
      actions.push_back({arng.uniform(-1, 1), arng.uniform(-1, 1)});

    auto run = [&] {
      auto [s, g] = env->reset(33);
      std::vector<std::vector<double>> states = {s.features};
      for (const auto& a : actions) {
        s = env->step(s, a);
        states.push_back(s.features);
      }
      return states;
    };
    CHECK(run() == run());
  }
}

TEST_CASE("point-push non-penetration holds under adversarial play") {
  auto env = make_env("point-push");
  const double floor_sep =
      env->spec().contact_radius - std::sqrt(2.0) * env->spec().dt * env->spec().v_max;
  REQUIRE(floor_sep > 0.0);

  Rng rng(424242);
  for (int ep = 0; ep < 300; ++ep) {
    auto [s, g] = env->reset(rng.bits());
    for (std::size_t t = 0; t < env->spec().horizon; ++t) {
      std::vector<double> a(2);
      const double mode = rng.uniform01();
      if (mode < 0.5) {
        // Charge straight at the box to stress the contact response.
        const double dx = s.features[2] - s.features[0];
        const double dy = s.features[3] - s.features[1];
        const double d = std::max(1e-9, std::hypot(dx, dy));
        a = {dx / d * 2.0, dy / d * 2.0};
      } else if (mode < 0.8) {
        // Shove everything into a wall/corner.
        a = {1.0, rng.uniform(0.5, 1.0)};
      } else {
        a = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
      }
      s = env->step(s, a);
      const double d = std::hypot(s.features[0] - s.features[2],
                                  s.features[1] - s.features[3]);
      CHECK(d >= floor_sep - 1e-12);
      // Box (the achieved goal) must remain inside the workspace.
      CHECK(s.features[2] >= -1.0);
      CHECK(s.features[2] <= 1.0);
      CHECK(s.features[3] >= -1.0);
      CHECK(s.features[3] <= 1.0);
    }
  }
}

TEST_CASE("point-push rejects a contact radius smaller than one step") {
  CHECK_THROWS_AS(make_env("point-push", EnvOptions{.contact_radius = 0.1}),
                  std::invalid_argument);
}

TEST_CASE("make_env rejects unknown ids and bad options") {
  CHECK_THROWS_AS(make_env("fetch-push"), std::invalid_argument);
  CHECK_THROWS_AS(make_env("point-reach", EnvOptions{.horizon = 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_env("point-reach", EnvOptions{.tolerance = 0.0}),
                  std::invalid_argument);
}
