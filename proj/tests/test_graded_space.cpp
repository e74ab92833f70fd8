#include "lpm/graded_space.hpp"

#include <doctest.h>

#include <cmath>

using namespace lpm;

TEST_CASE("graded_norm examples") {
  const NormLadder flat = NormLadder::uniform(2);
  CHECK(graded_norm(Vec::Zero(2), flat, 3.0) == 0.0);
  CHECK(graded_norm(Vec{{3.0, 4.0}}, flat, 0.0) == doctest::Approx(5.0).epsilon(1e-15));

  // mu_1(1) = 1, mu_2(1) = 2: k^2 = 0 and 3 with one derivative per level
  const NormLadder lad = NormLadder::fourier(Vec{{0.0, 3.0}}, 1.0);
  CHECK(lad.weight(1, 1.0) == doctest::Approx(2.0));
  CHECK(graded_norm(Vec{{1.0, 1.0}}, lad, 1.0) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("graded_norm rejects a dimension mismatch") {
  CHECK_THROWS_AS(graded_norm(Vec::Ones(3), NormLadder::uniform(2), 0.0), InvalidInput);
}

TEST_CASE("ladder is monotone in the level") {
  const NormLadder lad = NormLadder::fourier(Vec{{0.0, 1.0, 4.0, 9.0}}, 2.0);
  const Vec v{{0.3, -1.0, 0.5, 2.0}};
  double prev = 0.0;
  for (double r = 0.0; r <= 2.0; r += 0.5) {
    const double n = graded_norm(v, lad, r);
    CHECK(n >= prev);
    prev = n;
  }
  CHECK(graded_norm(v, lad, 0.0) == doctest::Approx(v.norm()));
}

TEST_CASE("weighted_orbit_norm examples") {
  const NormLadder flat = NormLadder::uniform(2);
  OrbitGrid single;
  single.times = Vec::Zero(1);
  single.states = Vec{{3.0, 4.0}};
  CHECK(weighted_orbit_norm(single, 7.0, flat, 0.0) == doctest::Approx(5.0));

  // e^{2t}(1, 0) on {-1, 0} with lambda = 1
  OrbitGrid g;
  g.times = Vec{{-1.0, 0.0}};
  g.states = Mat{{std::exp(-2.0), 1.0}, {0.0, 0.0}};
  CHECK(weighted_orbit_norm(g, 1.0, flat, 0.0) == doctest::Approx(1.0).epsilon(1e-15));

  // e^{lambda t} v0 cancels the weight exactly
  OrbitGrid e;
  e.times = Vec::LinSpaced(11, -5.0, 0.0);
  e.states.resize(2, 11);
  for (Index j = 0; j < 11; ++j) e.states.col(j) = std::exp(0.7 * e.times[j]) * Vec{{0.6, 0.8}};
  CHECK(weighted_orbit_norm(e, 0.7, flat, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("weighted_orbit_norm with lambda 0 is the sup norm") {
  OrbitGrid g;
  g.times = Vec{{-2.0, -1.0, 0.0}};
  g.states = Mat{{1.0, -3.0, 0.5}, {2.0, 0.0, 0.5}};
  CHECK(weighted_orbit_norm(g, 0.0, NormLadder::uniform(2), 0.0) == doctest::Approx(3.0));
}

TEST_CASE("weighted_orbit_norm rejects an empty orbit") {
  OrbitGrid g;
  CHECK_THROWS_AS(weighted_orbit_norm(g, 0.0, NormLadder::uniform(2), 0.0), InvalidInput);
}

TEST_CASE("state_at interpolates and hits nodes exactly") {
  OrbitGrid g;
  g.times = Vec{{0.0, 1.0, 2.0}};
  g.states = Mat{{0.0, 1.0, 4.0}};
  g.derivatives = Mat{{0.0, 2.0, 4.0}};
  CHECK(g.state_at(1.0)[0] == 1.0);
  // cubic Hermite reproduces t^2
  CHECK(g.state_at(1.5)[0] == doctest::Approx(2.25).epsilon(1e-14));
  OrbitGrid back = OrbitGrid::backward_uniform(1, 1.0, 0.25);
  CHECK(back.nodes() == 5);
  CHECK(back.times[0] == -1.0);
  CHECK(back.times[4] == 0.0);
}
