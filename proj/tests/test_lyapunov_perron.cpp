#include "lpm/lyapunov_perron.hpp"
#include "lpm/models.hpp"
#include "lpm/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace lpm;

namespace {

struct Saddle {
  ModelSystem model = saddle_toy("saddle1");
  SpectralSplitting split = eigen_split(model.jacobian(model.equilibrium), 0.1);
  LpSystem sys = split_field(model, split);
};

LpConfig saddle_cfg() {
  LpConfig cfg;
  cfg.lambda = 0.9;
  cfg.T_max = 20.0;
  cfg.dt = 0.01;
  cfg.eps = 0.1;
  return cfg;
}

}  // namespace

TEST_CASE("split_field on saddle1") {
  const Saddle s;
  CHECK(s.sys.dim_plus == 1);
  CHECK(s.sys.A_plus(0, 0) == doctest::Approx(1.0));
  CHECK(s.sys.A_rest(0, 0) == doctest::Approx(-1.0));
  for (double x : {-0.2, 0.05, 0.3}) {
    // canonical basis: z = (x, y)
    const Vec f = s.sys.remainder(Vec{{x, 0.7 * x}});
    CHECK(std::abs(f[0]) < 1e-15);
    CHECK(f[1] == doctest::Approx(x * x));
  }
}

TEST_CASE("split_field: linear model has zero remainder") {
  const Mat A{{1.5, 0.3}, {0.0, -2.0}};
  const ModelSystem m = affine_model(A, Vec::Zero(2));
  const LpSystem sys = split_field(m, eigen_split(A, 0.1));
  CHECK(sys.remainder(Vec{{0.4, -0.9}}).norm() < 1e-14);
}

TEST_CASE("split_field: MMT remainder is superlinear") {
  MmtParams p;
  p.alpha = p.beta = 0.5;
  p.sigma = -1.0;
  p.xi0 = 2;
  p.a = 0.5;
  p.radius = 3;
  const ModelSystem m = mmt_galerkin(p);
  const LpSystem sys = split_field(m, eigen_split(m.jacobian(m.equilibrium), 0.05));
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  Vec d(sys.dim);
  for (Index i = 0; i < d.size(); ++i) d[i] = nd(rng);
  d.normalize();
  const double s1 = 1e-3, s2 = 1e-2;
  const double slope = std::log(sys.remainder(s2 * d).norm() / sys.remainder(s1 * d).norm()) / std::log(s2 / s1);
  CHECK(slope >= 1.9);
}

TEST_CASE("lp_apply: zero remainder and first iterates") {
  const Mat A{{1.0, 0.0}, {0.0, -1.0}};
  const LpSystem lin = split_field(affine_model(A, Vec::Zero(2)), eigen_split(A, 0.1));
  LpConfig cfg = saddle_cfg();
  cfg.T_max = 5.0;
  const LpSolver ls(lin, cfg);
  const OrbitGrid out = ls.apply(Vec::Ones(1), ls.zero_orbit());
  for (Index j = 0; j < out.nodes(); j += 50) {
    CHECK(out.states(0, j) == doctest::Approx(std::exp(out.times[j])).epsilon(1e-10));
    CHECK(out.states(1, j) == 0.0);
  }

  const Saddle s;
  const LpSolver solver(s.sys, cfg);
  const double x0 = 0.1;
  const OrbitGrid first = solver.apply(Vec::Constant(1, x0), solver.zero_orbit());
  const OrbitGrid second = solver.apply(Vec::Constant(1, x0), first);
  for (Index j = 0; j < first.nodes(); j += 50) {
    const double t = first.times[j];
    CHECK(first.states(0, j) == doctest::Approx(x0 * std::exp(t)).epsilon(1e-10));
    CHECK(first.states(1, j) == 0.0);
    // truncation at -T_max contributes O(e^{-T_max - t})
    CHECK(std::abs(second.states(1, j) - x0 * x0 * std::exp(2.0 * t) / 3.0) <=
          1e-8 + x0 * x0 * std::exp(-cfg.T_max - t));
  }
}

TEST_CASE("lp_solve examples") {
  const Saddle s;
  const LpSolver solver(s.sys, saddle_cfg());
  const LpResult z = solver.solve(Vec::Zero(1));
  CHECK(z.h.norm() == 0.0);
  CHECK(z.orbit.states.norm() == 0.0);

  const LpResult r = solver.solve(Vec::Constant(1, 0.1));
  CHECK(std::abs(r.h[0] - 1.0 / 300.0) < 1e-6);
  CHECK(r.diag.contraction_factor < 1.0);

  const ModelSystem m2 = time_reversed(saddle_toy("saddle2"));
  const auto s2 = eigen_split(m2.jacobian(m2.equilibrium), 0.1);
  LpConfig cfg2;
  cfg2.eps = 0.2;
  const LpSolver stable(split_field(m2, s2), cfg2);
  const LpResult r2 = stable.solve(Vec::Constant(1, 0.2));
  const Vec u = s2.V * r2.z0;
  CHECK(std::abs(u[1] - 0.2) < 1e-14);
  CHECK(std::abs(u[0] + 0.01) < 1e-6);
}

TEST_CASE("manifold graph on saddle1") {
  const Saddle s;
  const LpSolver solver(s.sys, saddle_cfg());
  GraphSpec spec;
  spec.points_per_axis = 21;
  spec.eps = 0.1;
  ManifoldGraph g = build_manifold_graph(solver, spec);
  REQUIRE(g.samples.size() == 21);
  CHECK(g.failures == 0);
  for (const auto& smp : g.samples) {
    CHECK(std::abs(smp.value[0] - smp.base[0] * smp.base[0] / 3.0) < 1e-6);
    CHECK(smp.status == "ok");
  }
  CHECK(g.samples[10].base[0] == 0.0);
  const auto inv = invariance_residual(g, solver, 0.05);
  CHECK(inv.max_residual <= 1e-6);
  CHECK(g.samples[10].invariance_residual == 0.0);

  spec.jobs = 4;
  const ManifoldGraph g4 = build_manifold_graph(solver, spec);
  for (std::size_t i = 0; i < g.samples.size(); ++i) CHECK(g4.samples[i].value[0] == g.samples[i].value[0]);
}

TEST_CASE("graph base points stay in the ball") {
  for (Index m : {1, 2, 4}) {
    const auto pts = graph_base_points(m, 5, 0.3);
    CHECK_FALSE(pts.empty());
    for (const Vec& p : pts) CHECK(p.norm() <= 0.3 * (1.0 + 1e-12));
  }
}

TEST_CASE("contraction_budget examples") {
  const auto b = contraction_budget(1.0, 0.1, 1, -1.0, 1.0, 0.0);
  CHECK(b.L1 == doctest::Approx(0.2));
  CHECK(b.feasible_eps.has_value());
  const auto z = contraction_budget(1.0, 0.0, 1, -1.0, 1.0, 0.0);
  CHECK(z.L1 == 0.0);
  REQUIRE(z.feasible_eps.has_value());
  CHECK(*z.feasible_eps > 0.0);
  const auto bad = contraction_budget(1.0, 1.0, 1, -1.0, 1.0, 0.0);
  CHECK(bad.L1 == doctest::Approx(2.0));
  CHECK_FALSE(bad.feasible_eps.has_value());
  CHECK_THROWS_AS(contraction_budget(1.0, 0.1, 1, -1.0, 1.0, 1.5), InvalidInput);
}

TEST_CASE("decay_rate_fit") {
  OrbitGrid o = OrbitGrid::backward_uniform(2, 5.0, 0.05);
  for (Index j = 0; j < o.nodes(); ++j) o.states.col(j) = std::exp(2.0 * o.times[j]) * Vec{{0.3, -0.4}};
  const auto f = decay_rate_fit(o, NormLadder::uniform(2), 0.0);
  CHECK(f.lambda_fit == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-10));

  const Saddle s;
  const LpSolver solver(s.sys, saddle_cfg());
  const LpResult r = solver.solve(Vec::Constant(1, 0.1));
  CHECK(decay_rate_fit(r.orbit, NormLadder::uniform(2), 0.0).lambda_fit == doctest::Approx(1.0).epsilon(1e-3));

  // e^t + e^{2t}: slope between 1 and 2, closer to 1 on earlier windows
  auto window_fit = [](double T) {
    OrbitGrid w = OrbitGrid::backward_uniform(1, T, 0.05);
    for (Index j = 0; j < w.nodes(); ++j) w.states(0, j) = std::exp(w.times[j]) + std::exp(2.0 * w.times[j]);
    return decay_rate_fit(w, NormLadder::uniform(1), 0.0).lambda_fit;
  };
  const double near = window_fit(2.0), far = window_fit(20.0);
  CHECK(near > 1.0);
  CHECK(near < 2.0);
  CHECK(far < near);

  OrbitGrid zero = OrbitGrid::backward_uniform(2, 1.0, 0.1);
  CHECK_THROWS_WITH_AS(decay_rate_fit(zero, NormLadder::uniform(2), 0.0), doctest::Contains("trivial orbit"),
                       InvalidInput);
}

TEST_CASE("lp_variational") {
  const Saddle s;
  const LpSolver solver(s.sys, saddle_cfg());
  CHECK(lp_variational(solver, solver.solve(Vec::Zero(1))).norm() < 1e-12);
  for (double x0 : {-0.08, 0.05, 0.1}) {
    const Mat D = lp_variational(solver, solver.solve(Vec::Constant(1, x0)));
    CHECK(std::abs(D(0, 0) - 2.0 * x0 / 3.0) < 1e-5);
  }

  const ModelSystem rd = reaction_diffusion(0.5, 5);
  LpConfig cfg;
  cfg.eps = 0.1;
  const LpSolver rs(split_field(rd, eigen_split(rd.jacobian(rd.equilibrium), 0.1)), cfg);
  const Vec base = Vec::Constant(1, 0.06);
  const Mat D = lp_variational(rs, rs.solve(base));
  const double h = 1e-4;
  const Vec fd = (rs.solve(base + Vec::Constant(1, h)).h - rs.solve(base - Vec::Constant(1, h)).h) / (2.0 * h);
  CHECK((D.col(0) - fd).norm() <= 1e-3 * std::max(D.norm(), 1e-6));
}

TEST_CASE("quasilinearize") {
  const Saddle s;
  const QuasilinearSystem q = quasilinearize(s.model, s.split);
  const Vec u{{0.05, 0.05}};
  CHECK((q.invert_B(q.B(u)) - u).norm() <= 1e-10);
  const Mat Df0 = finite_difference_jacobian(q.system.remainder, Vec::Zero(2), 1e-4);
  CHECK(Df0.cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(q.system.remainder(Vec::Zero(2)).norm() <= 1e-14);

  const Mat A{{1.0, 0.2}, {0.0, -1.0}};
  const ModelSystem lin = affine_model(A, Vec::Zero(2));
  const QuasilinearSystem ql = quasilinearize(lin, eigen_split(A, 0.1));
  CHECK(ql.system.remainder(Vec{{0.03, -0.02}}).norm() < 1e-10);

  const LpSolver qs(q.system, saddle_cfg());
  const LpResult r = qs.solve(Vec::Constant(1, 0.05));
  const Vec uq = q.invert_B(q.system.lift(r.z0));
  CHECK(std::abs(uq[1] - uq[0] * uq[0] / 3.0) < 1e-6);
}
