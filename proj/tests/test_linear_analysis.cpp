#include "lpm/linear_analysis.hpp"
#include "lpm/models.hpp"
#include "lpm/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace lpm;

TEST_CASE("eigen_split: 2x2 Hamiltonian saddle") {
  const Mat A{{0.0, -1.0}, {-1.0, 0.0}};
  const auto s = eigen_split(A, 0.1);
  CHECK(s.dim_plus == 1);
  CHECK(s.dim_minus == 1);
  CHECK(s.dim_center == 0);
  CHECK(s.lambda_plus == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.rest_abscissa == doctest::Approx(-1.0).epsilon(1e-14));
  // X_+ is spanned by (1, -1)
  const Vec b = s.projection.basis_plus.col(0);
  CHECK(std::abs(b[0] + b[1]) < 1e-14);
  CHECK(s.projection.consistency_defect() < 1e-12);
}

TEST_CASE("eigen_split: diagonal with gap 0.5") {
  const auto s = eigen_split(Mat{{2.0, 0.0}, {0.0, -3.0}}, 0.5);
  CHECK(s.dim_plus == 1);
  CHECK(s.dim_minus == 1);
  CHECK(s.lambda_plus == 2.0);
  CHECK(s.omega_plus == doctest::Approx(1.25));
  CHECK(s.omega_minus == doctest::Approx(-1.25));
}

TEST_CASE("eigen_split: MMT pair block is all center") {
  MmtParams p;
  p.xi0 = 2;
  const auto s = eigen_split(mmt_block(p, 1).block, 0.1);
  CHECK(s.dim_center == 4);
  CHECK(s.dim_plus == 0);
}

TEST_CASE("eigen_split: ambiguous eigenvalue names itself") {
  const Mat A{{0.1, 0.0}, {0.0, -1.0}};
  try {
    eigen_split(A, 0.1);
    FAIL("expected an ambiguity error");
  } catch (const NumericalFailure& e) {
    CHECK(std::string(e.what()).find("0.1") != std::string::npos);
    CHECK(std::string(e.what()).find("ambiguous") != std::string::npos);
  }
  CHECK_THROWS_AS(eigen_split(Mat::Zero(2, 3), 0.1), InvalidInput);
  CHECK_THROWS_AS(eigen_split(Mat::Identity(2, 2), 0.0), InvalidInput);
}

TEST_CASE("eigen_split: blocks stay invariant for non-normal input") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  Mat A(6, 6);
  for (Index i = 0; i < 36; ++i) A(i) = nd(rng);
  A += Mat::Identity(6, 6) * 0.0;
  const auto s = eigen_split(A, 0.05);
  const Mat& Pp = s.projection.projector_plus;
  const Mat& Pr = s.projection.projector_rest;
  CHECK((Pp * A * Pr).norm() <= 1e-8 * A.norm());
  CHECK((Pr * A * Pp).norm() <= 1e-8 * A.norm());
  CHECK((Pp * Pr).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("hamiltonian_symmetry_check examples") {
  CHECK(hamiltonian_symmetry_check(Mat{{0.0, 1.0}, {-1.0, 0.0}}, 1e-12).worst_distance < 1e-15);
  CHECK(hamiltonian_symmetry_check(Mat{{1.0, 0.0}, {0.0, -1.0}}, 1e-12).worst_distance < 1e-15);
  const auto bad = hamiltonian_symmetry_check(Mat{{1.0, 0.0}, {0.0, -2.0}}, 1e-8);
  CHECK(bad.worst_distance == doctest::Approx(1.0));
  CHECK_FALSE(bad.symmetric);
}

TEST_CASE("lyapunov_form examples") {
  const auto f1 = lyapunov_form(Mat{{-1.0, 0.0}, {0.0, -2.0}}, 0.0);
  CHECK(f1.L(0, 0) == doctest::Approx(0.5));
  CHECK(f1.L(1, 1) == doctest::Approx(0.25));
  CHECK(std::abs(f1.L(0, 1)) < 1e-15);
  const auto f2 = lyapunov_form(Mat::Zero(1, 1), 1.0);
  CHECK(f2.L(0, 0) == doctest::Approx(0.5));
  const auto f3 = lyapunov_form(Mat{{0.0, 1.0}, {-1.0, 0.0}}, 1.0);
  CHECK((f3.L - 0.5 * Mat::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("lyapunov_form rejects omega below the abscissa") {
  try {
    lyapunov_form(Mat{{1.0}}, 0.5);
    FAIL("expected an error");
  } catch (const InvalidInput& e) {
    CHECK(std::string(e.what()).find("spectral abscissa violated") != std::string::npos);
  }
}

TEST_CASE("lyapunov_form agrees with the dense Kronecker solve") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> nd;
  for (int draw = 0; draw < 20; ++draw) {
    const Index n = 1 + draw % 7;
    Mat G(n, n);
    for (Index i = 0; i < n * n; ++i) G(i) = nd(rng);
    const double omega = spectral_abscissa(G) + 0.3;
    const auto f = lyapunov_form(G, omega);
    const Mat Lk = lyapunov_kronecker(G, omega);
    CHECK((f.L - Lk).norm() <= 1e-9 * std::max(1.0, Lk.norm()));
    CHECK(lyapunov_residual(G, f) <= 1e-10 * std::max(1.0, f.L.norm()));
  }
}

TEST_CASE("dissipativity_check examples") {
  CHECK(dissipativity_check({Mat::Identity(2, 2), 0.0}, Mat{{-1.0, 0.0}, {0.0, -2.0}}, 0.0) == doctest::Approx(-1.0));
  CHECK(std::abs(dissipativity_check({Mat::Identity(2, 2), 0.0}, Mat{{0.0, 1.0}, {-1.0, 0.0}}, 0.0)) < 1e-15);
  std::mt19937_64 rng(6);
  std::normal_distribution<double> nd;
  for (int draw = 0; draw < 20; ++draw) {
    Mat G(5, 5);
    for (Index i = 0; i < 25; ++i) G(i) = nd(rng);
    const Mat A = G - (spectral_abscissa(G) + 0.5) * Mat::Identity(5, 5);
    const auto f = lyapunov_form(A, 0.0);
    CHECK(dissipativity_check(f, A, 0.0) <= 1e-10);
  }
}

TEST_CASE("evolve examples") {
  const Timeline scalar = Timeline::autonomous(Mat::Constant(1, 1, 0.8));
  CHECK(evolve(scalar, Vec::Ones(1), 0.0, 2.5, 1e-3)[0] == doctest::Approx(std::exp(2.0)).epsilon(1e-10));

  const Timeline rot = Timeline::autonomous(Mat{{0.0, 1.0}, {-1.0, 0.0}});
  const Vec r = evolve(rot, Vec{{1.0, 0.0}}, 0.0, std::numbers::pi / 2.0, 1e-3);
  CHECK(std::abs(r[0]) < 1e-8);
  CHECK(std::abs(r[1] + 1.0) < 1e-8);

  const Timeline diag_t = Timeline::from_function([](double t) { return Mat::Constant(1, 1, t); }, -2.0, 2.0);
  CHECK(std::abs(evolve(diag_t, Vec::Ones(1), 0.0, 1.0, 1e-3)[0] - std::exp(0.5)) < 1e-8);
  CHECK_THROWS_AS(evolve(diag_t, Vec::Ones(1), 0.0, 3.0, 1e-3), InvalidInput);
}

TEST_CASE("evolve composes") {
  const Timeline tl = Timeline::from_function(
      [](double t) { return Mat{{std::sin(t), 1.0}, {-1.0, -0.5 * t}}; }, -3.0, 3.0);
  const Vec v{{0.3, -0.7}};
  const Vec a = evolve(tl, v, -1.0, 1.5, 1e-3);
  const Vec b = evolve(tl, evolve(tl, v, -1.0, 0.2, 1e-3), 0.2, 1.5, 1e-3);
  CHECK((a - b).norm() < 1e-10);
}

TEST_CASE("growth_bound_check examples") {
  const Mat A{{1.0, 0.0}, {0.0, -1.0}};
  const auto s = eigen_split(A, 0.1);
  const auto rep = growth_bound_check(Timeline::autonomous(A), s, {{2.0, 0.0}, {-2.0, 0.0}}, 1.0);
  REQUIRE(rep.ratios_rest.size() == 1);
  CHECK(rep.ratios_rest[0] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rep.ratios_plus[0] == doctest::Approx(1.0).epsilon(1e-8));

  const Mat R{{0.0, 1.0}, {-1.0, 0.0}};
  const auto sr = eigen_split(R, 0.1);
  const auto rr = growth_bound_check(Timeline::autonomous(R), sr, {{1.0, 0.0}, {3.0, 0.0}}, 1.0);
  CHECK(rr.worst_ratio <= 1.0 + 1e-8);
}

TEST_CASE("growth_bound_check along a saddle orbit") {
  const ModelSystem m = saddle_toy("saddle1");
  const auto s = eigen_split(m.jacobian(m.equilibrium), 0.1);
  // orbit on the unstable manifold, growing from 0.05 e^{-4} to 0.05
  const double x0 = 0.05 * std::exp(-4.0);
  const OrbitGrid orbit = trajectory(m, Vec{{x0, x0 * x0 / 3.0}}, 4.0, 0.01);
  const Timeline tl = Timeline::along_orbit(m, orbit);
  const auto rep = growth_bound_check(tl, s, {{1.0, 3.0}, {3.0, 1.0}, {0.0, 4.0}, {4.0, 0.0}}, 1.0);
  CHECK(rep.worst_ratio <= 1.05);
}

TEST_CASE("metric_variation_bound examples") {
  const auto c = metric_variation_bound({0.0, 1.0, 2.0}, {Mat::Identity(2, 2), Mat::Identity(2, 2), Mat::Identity(2, 2)});
  CHECK(c.direct == doctest::Approx(1.0));
  CHECK(c.bound == doctest::Approx(1.0));
  const auto e = metric_variation_bound({0.0, 1.0}, {Mat::Identity(2, 2), std::exp(1.0) * Mat::Identity(2, 2)});
  CHECK(e.direct == doctest::Approx(std::sqrt(std::exp(1.0))));
  CHECK(e.direct <= e.bound);
  const Mat L0{{1.0, 0.0}, {0.0, 2.0}}, L1{{2.0, 0.0}, {0.0, 1.0}};
  const auto sw = metric_variation_bound({0.0, 1.0}, {L0, L1});
  CHECK(sw.direct == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(metric_variation_bound({0.0, 1.0}, {L0, -L1}), InvalidInput);
}

TEST_CASE("picard_solve examples") {
  const ModelSystem decay = affine_model(Mat::Constant(1, 1, -1.0), Vec::Zero(1));
  const auto r1 = picard_solve(decay, Vec::Ones(1), 1.0, 1e-3);
  CHECK(std::abs(r1.orbit.states(0, r1.orbit.nodes() - 1) - std::exp(-1.0)) < 1e-9);

  const ModelSystem aff = affine_model(Mat::Constant(1, 1, -1.0), Vec::Ones(1));
  const auto r2 = picard_solve(aff, Vec::Zero(1), 1.0, 1e-3);
  for (Index j = 0; j < r2.orbit.nodes(); j += 100)
    CHECK(std::abs(r2.orbit.states(0, j) - (1.0 - std::exp(-r2.orbit.times[j]))) < 1e-9);

  const ModelSystem m = saddle_toy("saddle1");
  const Vec u0{{0.1, 0.0}};
  const auto r3 = picard_solve(m, u0, 0.5, 1e-3);
  CHECK((r3.orbit.states.col(r3.orbit.nodes() - 1) - rk4_flow(m.field, u0, 0.5, 1e-4)).norm() < 1e-6);
  CHECK(r3.contraction < 1.0);
}

TEST_CASE("variational_flow examples") {
  const ModelSystem lin = affine_model(Mat::Identity(1, 1), Vec::Zero(1));
  const auto o1 = trajectory(lin, Vec::Ones(1), 1.0, 0.1);
  CHECK(variational_flow(lin, o1, 1e-3).U.back()(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-10));

  ModelSystem sq;
  sq.name = "square";
  sq.dimension = 1;
  sq.field = [](const Vec& u) { return Vec(u.array().square()); };
  sq.jacobian = [](const Vec& u) { return Mat::Constant(1, 1, 2.0 * u[0]); };
  sq.equilibrium = Vec::Zero(1);
  sq.ladder = NormLadder::uniform(1);
  const auto o2 = trajectory(sq, Vec::Constant(1, 0.5), 1.0, 1e-3);
  CHECK(variational_flow(sq, o2, 1e-3).U.back()(0, 0) == doctest::Approx(4.0).epsilon(1e-8));

  const ModelSystem m = saddle_toy("saddle1");
  const Vec u0{{0.1, 0.01 / 3.0}};
  const auto o3 = trajectory(m, u0, -1.0, 0.01);
  const Mat U = variational_flow(m, o3, 1e-3).U.back();
  Mat fd(2, 2);
  for (Index j = 0; j < 2; ++j) {
    Vec e = Vec::Zero(2);
    e[j] = 1e-6;
    fd.col(j) = (rk4_flow(m.field, u0 + e, -1.0, 1e-3) - rk4_flow(m.field, u0 - e, -1.0, 1e-3)) / 2e-6;
  }
  CHECK((U - fd).norm() <= 1e-5 * fd.norm());
}

TEST_CASE("variational_flow rejects a non-trajectory") {
  const ModelSystem m = saddle_toy("saddle1");
  OrbitGrid bogus;
  bogus.times = Vec{{0.0, 1.0}};
  bogus.states = Mat{{1.0, 0.0}, {0.0, 1.0}};
  CHECK_THROWS_WITH_AS(variational_flow(m, bogus, 1e-3), doctest::Contains("not a trajectory"), InvalidInput);
}
