#include "lpm/lyapunov_perron.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

namespace lpm {

namespace {

double halton(Index i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

// a second solver on a grid of double (or half) the step, for Richardson estimates
struct Richardson {
  std::optional<LpSolver> coarse;
  double factor = 1.0 / 3.0;

  explicit Richardson(const LpSolver& s) {
    LpConfig c = s.config();
    c.lambda = s.lambda();
    const Index steps = s.nodes() - 1;
    if (steps % 2 == 0) {
      c.dt *= 2.0;
      factor = 1.0 / 3.0;
    } else {
      c.dt *= 0.5;
      factor = 4.0 / 3.0;
    }
    coarse.emplace(s.system(), c);
  }
  double estimate(const Vec& base, const Vec& h) const { return factor * (coarse->solve(base).h - h).norm(); }
};

void solve_sample(const LpSolver& solver, const Richardson* rich, GraphSample& s) {
  try {
    const LpResult res = solver.solve(s.base);
    s.value = res.h;
    s.iterations = res.diag.iterations;
    s.contraction = res.diag.contraction_factor;
    s.fp_residual = res.diag.fp_residual;
    s.trajectory_residual = res.diag.trajectory_residual;
    s.tail_bound = res.diag.tail_bound;
    if (rich) s.budget = rich->estimate(s.base, res.h);
    if (s.base.norm() > 0.0) {
      try {
        const DecayFit fit = decay_rate_fit(solver.system().lift(res.orbit), solver.system().ladder, solver.config().r);
        s.lambda_fit = fit.lambda_fit;
        s.fit_r2 = fit.r2;
      } catch (const InvalidInput&) {
      }
    }
  } catch (const std::exception& e) {
    s.status = std::string("failed: ") + e.what();
    s.value = Vec::Constant(solver.system().dim_rest(), std::numeric_limits<double>::quiet_NaN());
  }
}

}  // namespace

std::vector<Vec> graph_base_points(Index dim_plus, Index points_per_axis, double eps) {
  if (dim_plus < 1) throw InvalidInput("graph_base_points: X_+ is trivial");
  if (points_per_axis < 1) throw InvalidInput("graph_base_points: need at least one point per axis");
  if (!(eps > 0.0)) throw InvalidInput("graph_base_points: eps must be positive");
  std::vector<Vec> pts;
  const double half = eps / std::sqrt(static_cast<double>(dim_plus));
  auto coord = [&](Index i) {
    // integer numerator keeps the grid exactly symmetric about 0
    if (points_per_axis == 1) return 0.0;
    const auto k = static_cast<double>(2 * i - (points_per_axis - 1));
    return half * k / static_cast<double>(points_per_axis - 1);
  };
  if (dim_plus <= 3) {
    Index total = 1;
    for (Index d = 0; d < dim_plus; ++d) total *= points_per_axis;
    for (Index idx = 0; idx < total; ++idx) {
      Vec p(dim_plus);
      Index rem = idx;
      for (Index d = dim_plus - 1; d >= 0; --d) {
        p[d] = coord(rem % points_per_axis);
        rem /= points_per_axis;
      }
      pts.push_back(p);
    }
    return pts;
  }
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  if (dim_plus > 16) throw InvalidInput("graph_base_points: X_+ dimension above 16 not supported");
  pts.push_back(Vec::Zero(dim_plus));
  for (Index i = 1; i < points_per_axis; ++i) {
    Vec p(dim_plus);
    for (Index d = 0; d < dim_plus; ++d) p[d] = half * (2.0 * halton(i, primes[d]) - 1.0);
    pts.push_back(p);
  }
  return pts;
}

ManifoldGraph build_manifold_graph(const LpSolver& solver, const GraphSpec& spec) {
  const std::vector<Vec> bases = graph_base_points(solver.system().dim_plus, spec.points_per_axis, spec.eps);
  ManifoldGraph g;
  g.samples.resize(bases.size());
  for (std::size_t i = 0; i < bases.size(); ++i) g.samples[i].base = bases[i];

  std::optional<Richardson> rich;
  if (spec.richardson) rich.emplace(solver);
  const Richardson* rp = rich ? &*rich : nullptr;

  const unsigned jobs = std::max(1u, spec.jobs);
  if (jobs == 1) {
    for (auto& s : g.samples) solve_sample(solver, rp, s);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < g.samples.size(); i = next++) solve_sample(solver, rp, g.samples[i]);
      });
    for (auto& th : pool) th.join();
  }

  const LpSystem& sys = solver.system();
  const Index m = sys.dim_plus;
  const double level = solver.config().r - 1.0;
  std::vector<Vec> lb, lh;
  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < g.samples.size(); ++i) {
    if (g.samples[i].status != "ok") {
      ++g.failures;
      continue;
    }
    ok.push_back(i);
    lb.push_back(sys.V.leftCols(m) * g.samples[i].base);
    lh.push_back(sys.V.rightCols(sys.dim_rest()) * g.samples[i].value);
  }
  if (ok.empty()) throw NumericalFailure("build_manifold_graph: every sample failed");

  for (std::size_t a = 0; a < ok.size(); ++a)
    for (std::size_t b = a + 1; b < ok.size(); ++b) {
      const double db = graded_norm(lb[a] - lb[b], sys.ladder, level);
      if (db > 0.0) g.lipschitz = std::max(g.lipschitz, graded_norm(lh[a] - lh[b], sys.ladder, level) / db);
    }

  // |h|/|v| = slope + quad |v|
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double cnt = 0;
  for (std::size_t a = 0; a < ok.size(); ++a) {
    const double nv = graded_norm(lb[a], sys.ladder, level);
    if (nv <= 0.0) continue;
    const double ratio = graded_norm(lh[a], sys.ladder, level) / nv;
    sx += nv, sy += ratio, sxx += nv * nv, sxy += nv * ratio, cnt += 1;
  }
  if (cnt >= 2) {
    const double den = cnt * sxx - sx * sx;
    if (den > 0.0) {
      g.quadratic_coeff = (cnt * sxy - sx * sy) / den;
      g.tangency_slope = (sy - g.quadratic_coeff * sx) / cnt;
    }
  }
  return g;
}

InvarianceReport invariance_residual(ManifoldGraph& graph, const LpSolver& solver, double dt_flow) {
  if (!(dt_flow > 0.0)) throw InvalidInput("invariance_residual: flow time must be positive");
  const LpSystem& sys = solver.system();
  const Index m = sys.dim_plus;
  const double tol = solver.config().tol;
  const Richardson rich(solver);
  const double step = std::min(1e-3, dt_flow / 10.0);
  InvarianceReport rep;
  for (GraphSample& s : graph.samples) {
    if (s.status != "ok") continue;
    Vec z(sys.dim);
    z << s.base, s.value;
    if (z.norm() == 0.0) {
      s.invariance_residual = 0.0;
      s.invariance_budget = tol;
      continue;
    }
    const Vec zf = rk4_flow(sys.field, z, dt_flow, step);
    const Vec zc = rk4_flow(sys.field, z, dt_flow, 2.0 * step);
    const double rk_err = (zf - zc).norm() / 15.0;
    const Vec nb = zf.head(m);
    if (nb.norm() > solver.config().eps) {
      s.status = "inv-skipped";
      ++rep.skipped;
      continue;
    }
    try {
      const LpResult res = solver.solve(nb);
      s.invariance_residual = (res.h - zf.tail(sys.dim_rest())).norm();
      const double grow = std::exp(dt_flow * sys.field_jacobian(z).norm());
      const double new_budget = rich.estimate(nb, res.h);
      s.invariance_budget = tol + new_budget + grow * (s.budget + tol) + rk_err;
      rep.max_residual = std::max(rep.max_residual, s.invariance_residual);
      rep.max_ratio = std::max(rep.max_ratio, s.invariance_residual / s.invariance_budget);
    } catch (const std::exception& e) {
      s.status = std::string("failed: ") + e.what();
    }
  }
  return rep;
}

SampledConstants sample_constants(const LpSolver& solver, double eps, unsigned seed, int draws) {
  const LpSystem& sys = solver.system();
  const double T = solver.config().T_max;
  SampledConstants c;
  auto op = [](const Mat& M) { return M.size() ? Eigen::JacobiSVD<Mat>(M).singularValues()(0) : 0.0; };
  const Index m = sys.dim_plus, q = sys.dim_rest();
  c.C0 = std::max({1.0, op(sys.V.leftCols(m) * sys.Vinv.topRows(m)), op(sys.V.rightCols(q) * sys.Vinv.bottomRows(q))});
  const int samples = 200;
  const double ds = T / samples;
  const Mat stepP = (-ds * sys.A_plus).exp();
  Mat P = Mat::Identity(m, m);
  Mat R = Mat::Identity(q, q);
  const Mat stepR = q ? Mat((ds * sys.A_rest).exp()) : Mat(0, 0);
  for (int i = 1; i <= samples; ++i) {
    P = stepP * P;
    c.C0 = std::max(c.C0, op(P) * std::exp(sys.lambda_plus * ds * i));
    if (q) {
      R = stepR * R;
      c.C0 = std::max(c.C0, op(R) * std::exp(-sys.lambda_minus * ds * i));
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  for (int i = 0; i < draws; ++i) {
    Vec d(sys.dim);
    for (Index k = 0; k < sys.dim; ++k) d[k] = normal(rng);
    // uniform in the ball; every tenth draw on the sphere
    const double rad = i % 10 == 0 ? eps : eps * std::pow(unif(rng), 1.0 / static_cast<double>(sys.dim));
    const Vec z = rad * d.normalized();
    c.Cf = std::max(c.Cf, op(sys.remainder_jacobian(z)));
  }
  return c;
}

}  // namespace lpm
