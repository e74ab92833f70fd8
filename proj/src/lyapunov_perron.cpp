#include "lpm/lyapunov_perron.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lpm {

void LpConfig::validate() const {
  if (!(dt > 0.0) || !(T_max > dt)) throw InvalidInput("LpConfig: need 0 < dt < T_max");
  if (!(eps > 0.0)) throw InvalidInput("LpConfig: eps must be positive");
  if (max_iter < 1) throw InvalidInput("LpConfig: max_iter must be at least 1");
  if (!(tol > 0.0)) throw InvalidInput("LpConfig: tol must be positive");
  if (!(r >= 1.0)) throw InvalidInput("LpConfig: working level r must be at least 1");
  const double steps = T_max / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps) throw InvalidInput("LpConfig: T_max must be a multiple of dt");
}

OrbitGrid LpSystem::lift(const OrbitGrid& z) const {
  OrbitGrid u;
  u.times = z.times;
  u.states = V * z.states;
  if (z.has_derivatives()) u.derivatives = V * z.derivatives;
  return u;
}

LpSystem split_field(const ModelSystem& model, const SpectralSplitting& s) {
  if (s.dimension() != model.dimension) throw InvalidInput("split_field: splitting does not match the model dimension");
  const Index n = model.dimension, m = s.dim_plus;
  const Mat A = model.jacobian(model.equilibrium);
  const Mat Lam = s.Vinv * A * s.V;

  LpSystem sys;
  sys.name = model.name;
  sys.dim = n;
  sys.dim_plus = m;
  sys.V = s.V;
  sys.Vinv = s.Vinv;
  sys.A_plus = Lam.topLeftCorner(m, m);
  sys.A_rest = Lam.bottomRightCorner(n - m, n - m);
  Mat blocks = Mat::Zero(n, n);
  blocks.topLeftCorner(m, m) = sys.A_plus;
  blocks.bottomRightCorner(n - m, n - m) = sys.A_rest;

  const Vec eq = model.equilibrium;
  const Mat V = s.V, Vinv = s.Vinv;
  sys.field = [F = model.field, eq, V, Vinv](const Vec& z) -> Vec { return Vinv * F(eq + V * z); };
  sys.field_jacobian = [J = model.jacobian, eq, V, Vinv](const Vec& z) -> Mat { return Vinv * J(eq + V * z) * V; };
  sys.remainder = [G = sys.field, blocks](const Vec& z) -> Vec { return G(z) - blocks * z; };
  sys.remainder_jacobian = [DG = sys.field_jacobian, blocks](const Vec& z) -> Mat { return DG(z) - blocks; };
  sys.ladder = model.ladder;
  sys.lambda_plus = s.lambda_plus;
  sys.lambda_minus = m < n ? s.rest_abscissa : -s.gap;
  if (s.dim_center > 0) sys.lambda_minus = std::max(sys.lambda_minus, 0.0);

  // f(0) = 0 and Df(0) = 0 by central differences
  const double scale = std::max(1.0, A.cwiseAbs().rowwise().sum().maxCoeff());
  const Vec f0 = sys.remainder(Vec::Zero(n));
  if (f0.cwiseAbs().maxCoeff() > 1e-10 * scale) throw InvalidInput("split_field: F(equilibrium) != 0");
  const double hstep = 1e-5;
  double worst = 0.0;
  for (Index j = 0; j < n; ++j) {
    Vec e = Vec::Zero(n);
    e[j] = hstep;
    const Vec col = (sys.remainder(e) - sys.remainder(-e)) / (2.0 * hstep);
    worst = std::max(worst, col.cwiseAbs().maxCoeff());
  }
  if (worst > 1e-6 * scale) throw NumericalFailure("split_field: splitting inconsistent with Jacobian");
  return sys;
}

namespace {

// e^{X}, phi_1(X), phi_2(X) from one exponential of the augmented matrix
void phi_functions(const Mat& X, Mat& E, Mat& phi1, Mat& phi2) {
  const Index m = X.rows();
  if (m == 0) {
    E = phi1 = phi2 = Mat(0, 0);
    return;
  }
  Mat aug = Mat::Zero(3 * m, 3 * m);
  aug.topLeftCorner(m, m) = X;
  aug.block(0, m, m, m).setIdentity();
  aug.block(m, 2 * m, m, m).setIdentity();
  const Mat ex = aug.exp();
  E = ex.topLeftCorner(m, m);
  phi1 = ex.block(0, m, m, m);
  phi2 = ex.block(0, 2 * m, m, m);
}

// RK4 propagator of y' = A(s) y over a step, A linear between Aa (start) and Ab (end)
Mat propagate(const Mat& Aa, const Mat& Ab, double span) {
  const Index m = Aa.rows();
  Mat U = Mat::Identity(m, m);
  if (m == 0) return U;
  const double anorm = std::max(Aa.cwiseAbs().rowwise().sum().maxCoeff(), Ab.cwiseAbs().rowwise().sum().maxCoeff());
  const auto sub = std::max<Index>(1, static_cast<Index>(std::ceil(anorm * std::abs(span) / 0.1)));
  const double hs = span / static_cast<double>(sub);
  for (Index i = 0; i < sub; ++i) {
    const double s0 = static_cast<double>(i) / sub, s1 = static_cast<double>(i + 1) / sub, sm = 0.5 * (s0 + s1);
    const Mat A0 = (1 - s0) * Aa + s0 * Ab, Am = (1 - sm) * Aa + sm * Ab, A1 = (1 - s1) * Aa + s1 * Ab;
    const Mat k1 = A0 * U;
    const Mat k2 = Am * (U + 0.5 * hs * k1);
    const Mat k3 = Am * (U + 0.5 * hs * k2);
    const Mat k4 = A1 * (U + hs * k3);
    U += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return U;
}

}  // namespace

LpSolver::LpSolver(LpSystem sys, LpConfig cfg) : sys_(std::move(sys)), cfg_(cfg) {
  cfg_.validate();
  n_ = static_cast<Index>(std::llround(cfg_.T_max / cfg_.dt));
  h_ = cfg_.T_max / static_cast<double>(n_);
  const double lo = sys_.lambda_minus, hi = sys_.lambda_plus;
  if (sys_.dim_plus == 0) throw InvalidInput("LpSolver: the splitting has no X_+ directions");
  lambda_ = std::isnan(cfg_.lambda) ? 0.5 * (lo + hi) : cfg_.lambda;
  if (!(lambda_ > lo && lambda_ < hi)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "LpSolver: lambda = " << lambda_ << " outside the spectral gap (" << lo << ", " << hi << ")";
    throw InvalidInput(msg.str());
  }
  Mat p1, p2;
  phi_functions(h_ * sys_.A_rest, Er_, p1, p2);
  W0r_ = h_ * (p1 - p2);
  W1r_ = h_ * p2;
  phi_functions(-h_ * sys_.A_plus, Ep_, p1, p2);
  W0p_ = h_ * p2;         // multiplies f_j
  W1p_ = h_ * (p1 - p2);  // multiplies f_{j+1}

  // C = sup_s |e^{s A_r}| e^{-lambda_- s} on [0, T_max]
  tail_C_ = 1.0;
  if (sys_.dim_rest() > 0) {
    const int samples = 200;
    const double ds = cfg_.T_max / samples;
    const Mat step = (ds * sys_.A_rest).exp();
    Mat P = Mat::Identity(sys_.dim_rest(), sys_.dim_rest());
    for (int i = 1; i <= samples; ++i) {
      P = step * P;
      const double nrm = Eigen::JacobiSVD<Mat>(P).singularValues()(0);
      tail_C_ = std::max(tail_C_, nrm * std::exp(-sys_.lambda_minus * ds * i));
    }
  }
}

OrbitGrid LpSolver::zero_orbit() const {
  OrbitGrid g = OrbitGrid::backward_uniform(sys_.dim, cfg_.T_max, cfg_.dt);
  for (Index j = 0; j <= n_; ++j) g.times[j] = -cfg_.T_max + static_cast<double>(j) * h_;
  g.times[n_] = 0.0;
  return g;
}

std::vector<Mat> LpSolver::sweep(const Mat& plus0, const std::vector<Mat>& f, const std::vector<Mat>* ops) const {
  const Index m = sys_.dim_plus, q = sys_.dim_rest(), c = plus0.cols();
  std::vector<Mat> out(static_cast<std::size_t>(n_ + 1), Mat::Zero(sys_.dim, c));
  auto at = [](auto& v, Index j) -> auto& { return v[static_cast<std::size_t>(j)]; };

  at(out, n_).topRows(m) = plus0;
  if (!ops) {
    for (Index j = n_ - 1; j >= 0; --j)
      at(out, j).topRows(m) = Ep_ * at(out, j + 1).topRows(m) - (W0p_ * at(f, j).topRows(m) + W1p_ * at(f, j + 1).topRows(m));
    for (Index j = 0; j < n_; ++j)
      at(out, j + 1).bottomRows(q) =
          Er_ * at(out, j).bottomRows(q) + W0r_ * at(f, j).bottomRows(q) + W1r_ * at(f, j + 1).bottomRows(q);
    return out;
  }
  // non-autonomous blocks: RK4 step propagators and trapezoidal quadrature
  for (Index j = n_ - 1; j >= 0; --j) {
    const Mat Q = propagate(at(*ops, j + 1).topLeftCorner(m, m), at(*ops, j).topLeftCorner(m, m), -h_);
    at(out, j).topRows(m) =
        Q * at(out, j + 1).topRows(m) - 0.5 * h_ * (at(f, j).topRows(m) + Q * at(f, j + 1).topRows(m));
  }
  for (Index j = 0; j < n_; ++j) {
    const Mat P = propagate(at(*ops, j).bottomRightCorner(q, q), at(*ops, j + 1).bottomRightCorner(q, q), h_);
    at(out, j + 1).bottomRows(q) =
        P * at(out, j).bottomRows(q) + 0.5 * h_ * (P * at(f, j).bottomRows(q) + at(f, j + 1).bottomRows(q));
  }
  return out;
}

OrbitGrid LpSolver::apply(const Vec& z0_plus, const OrbitGrid& orbit) const {
  if (z0_plus.size() != sys_.dim_plus) throw InvalidInput("lp_apply: base point has the wrong dimension");
  if (orbit.nodes() != n_ + 1 || orbit.dimension() != sys_.dim) throw InvalidInput("lp_apply: orbit is not on the configured grid");
  std::vector<Mat> f(static_cast<std::size_t>(n_ + 1));
  std::vector<Mat> ops;
  for (Index j = 0; j <= n_; ++j) {
    const Vec z = orbit.states.col(j);
    f[static_cast<std::size_t>(j)] = sys_.remainder(z);
    if (!sys_.autonomous()) ops.push_back(sys_.block_operator(z));
  }
  const std::vector<Mat> out = sweep(z0_plus, f, sys_.autonomous() ? nullptr : &ops);
  OrbitGrid g = zero_orbit();
  for (Index j = 0; j <= n_; ++j) g.states.col(j) = out[static_cast<std::size_t>(j)].col(0);
  if (!g.states.allFinite()) throw NumericalFailure("lp_apply: non-finite intermediate");
  return g;
}

double LpSolver::weighted_norm(const OrbitGrid& z) const {
  return weighted_orbit_norm(sys_.lift(z), lambda_, sys_.ladder, cfg_.r - 1.0);
}

double LpSolver::tail_bound(const Vec& f_rest_start) const {
  if (sys_.dim_rest() == 0) return 0.0;
  return tail_C_ * tail_C_ * f_rest_start.norm() * std::exp(sys_.lambda_minus * cfg_.T_max) /
         (lambda_ - sys_.lambda_minus);
}

LpResult LpSolver::solve(const Vec& z0_plus) const {
  if (z0_plus.size() != sys_.dim_plus) throw InvalidInput("lp_solve: base point has the wrong dimension");
  if (z0_plus.norm() > cfg_.eps * (1.0 + 1e-12)) throw InvalidInput("lp_solve: base point outside the eps-ball");

  LpResult res;
  OrbitGrid z = zero_orbit();
  int above = 0;
  for (int it = 1;; ++it) {
    OrbitGrid next = apply(z0_plus, z);
    OrbitGrid diff = next;
    diff.states -= z.states;
    const double inc = weighted_norm(diff);
    res.diag.increments.push_back(inc);
    res.diag.iterations = it;
    z = std::move(next);
    const auto k = res.diag.increments.size();
    if (k >= 2 && res.diag.increments[k - 2] > 0.0) {
      const double ratio = inc / res.diag.increments[k - 2];
      res.diag.contraction_factor = std::max(res.diag.contraction_factor, ratio);
      above = ratio >= 1.0 && inc > cfg_.tol ? above + 1 : 0;
      if (above >= 3) throw NumericalFailure("lp_solve: no contraction: shrink eps or adjust lambda");
    }
    if (inc <= cfg_.tol) break;
    if (it >= cfg_.max_iter) throw NumericalFailure("lp_solve: iteration limit reached before tolerance");
  }
  OrbitGrid check = apply(z0_plus, z);
  check.states -= z.states;
  res.diag.fp_residual = weighted_norm(check);

  // centered-difference trajectory residual on the lifted orbit
  double traj = 0.0;
  for (Index j = 1; j < n_; ++j) {
    const Vec dz = (z.states.col(j + 1) - z.states.col(j - 1)) / (2.0 * h_);
    traj = std::max(traj, (sys_.V * (dz - sys_.field(z.states.col(j)))).norm());
  }
  res.diag.trajectory_residual = traj;
  res.diag.tail_bound = tail_bound(sys_.remainder(z.states.col(0)).tail(sys_.dim_rest()));

  res.z0 = z.states.col(n_);
  res.h = res.z0.tail(sys_.dim_rest());
  res.orbit = std::move(z);
  return res;
}

std::vector<Mat> LpSolver::variational(const LpResult& base) const {
  if (!sys_.autonomous()) throw InvalidInput("lp_variational: only the semilinear splitting is supported");
  if (base.orbit.nodes() != n_ + 1) throw InvalidInput("lp_variational: base orbit is not on the configured grid");
  if (base.diag.fp_residual > 10.0 * cfg_.tol) throw InvalidInput("lp_variational: base orbit residual too large");
  const Index m = sys_.dim_plus;
  std::vector<Mat> Df(static_cast<std::size_t>(n_ + 1));
  for (Index j = 0; j <= n_; ++j) Df[static_cast<std::size_t>(j)] = sys_.remainder_jacobian(base.orbit.states.col(j));

  std::vector<Mat> U(static_cast<std::size_t>(n_ + 1), Mat::Zero(sys_.dim, m));
  const Mat I = Mat::Identity(m, m);
  double prev_inc = 0.0;
  int above = 0;
  for (int it = 1;; ++it) {
    std::vector<Mat> f(U.size());
    for (std::size_t j = 0; j < U.size(); ++j) f[j] = Df[j] * U[j];
    std::vector<Mat> next = sweep(I, f, nullptr);
    double inc = 0.0;
    for (Index j = 0; j <= n_; ++j) {
      const auto js = static_cast<std::size_t>(j);
      const double t = -cfg_.T_max + static_cast<double>(j) * h_;
      inc = std::max(inc, std::exp(-lambda_ * t) * (sys_.V * (next[js] - U[js])).norm());
    }
    U = std::move(next);
    if (inc <= cfg_.tol) break;
    if (prev_inc > 0.0) above = inc >= prev_inc ? above + 1 : 0;
    if (above >= 3) throw NumericalFailure("lp_variational: no contraction");
    if (it >= cfg_.max_iter) throw NumericalFailure("lp_variational: iteration limit reached");
    prev_inc = inc;
  }
  return U;
}

OrbitGrid lp_apply(const LpSystem& sys, const Vec& z0_plus, const OrbitGrid& orbit, const LpConfig& cfg) {
  return LpSolver(sys, cfg).apply(z0_plus, orbit);
}

LpResult lp_solve(const LpSystem& sys, const Vec& z0_plus, const LpConfig& cfg) {
  return LpSolver(sys, cfg).solve(z0_plus);
}

Mat lp_variational(const LpSolver& solver, const LpResult& base) {
  const std::vector<Mat> U = solver.variational(base);
  return U.back().bottomRows(solver.system().dim_rest());
}

DecayFit decay_rate_fit(const OrbitGrid& orbit, const NormLadder& ladder, double r) {
  std::vector<double> ts, ys;
  bool nonzero = false;
  for (Index j = 0; j < orbit.nodes(); ++j) {
    const double nv = graded_norm(orbit.states.col(j), ladder, r);
    if (nv > 0.0) nonzero = true;
    if (nv > 1e-12) {
      ts.push_back(orbit.times[j]);
      ys.push_back(std::log(nv));
    }
  }
  if (!nonzero) throw InvalidInput("decay_rate_fit: trivial orbit");
  if (ts.size() < 10) throw InvalidInput("decay_rate_fit: fewer than 10 nodes above the noise floor");
  const double n = static_cast<double>(ts.size());
  double mt = 0, my = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) mt += ts[i], my += ys[i];
  mt /= n;
  my /= n;
  double stt = 0, sty = 0, syy = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    stt += (ts[i] - mt) * (ts[i] - mt);
    sty += (ts[i] - mt) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  DecayFit fit;
  fit.lambda_fit = sty / stt;
  fit.r2 = syy > 0.0 ? sty * sty / (stt * syy) : 1.0;
  return fit;
}

}  // namespace lpm
