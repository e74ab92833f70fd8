#include "lpm/linear_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lpm {

namespace {

Index step_count(double span, double dt) {
  if (!(dt > 0.0)) throw InvalidInput("step size must be positive");
  return std::max<Index>(1, static_cast<Index>(std::ceil(std::abs(span) / dt - 1e-9)));
}

}  // namespace

OrbitGrid trajectory(const ModelSystem& model, const Vec& u0, double T, double dt) {
  if (u0.size() != model.dimension) throw InvalidInput("trajectory: dimension mismatch");
  const Index n = step_count(T, dt);
  const double h = T / static_cast<double>(n);
  OrbitGrid g;
  g.times.resize(n + 1);
  g.states.resize(model.dimension, n + 1);
  g.derivatives.resize(model.dimension, n + 1);
  Vec u = u0;
  for (Index j = 0; j <= n; ++j) {
    g.times[j] = j == n ? T : static_cast<double>(j) * h;
    g.states.col(j) = u;
    g.derivatives.col(j) = model.field(u);
    if (j < n) u = rk4_step(model.field, u, h);
  }
  return g;
}

PicardResult picard_solve(const ModelSystem& model, const Vec& u0, double T, double dt, int max_iter, double tol) {
  if (!(T > 0.0)) throw InvalidInput("picard_solve: T must be positive");
  if (u0.size() != model.dimension) throw InvalidInput("picard_solve: dimension mismatch");
  if (max_iter < 1 || !(tol > 0.0)) throw InvalidInput("picard_solve: need max_iter >= 1 and tol > 0");
  const Index n = step_count(T, dt);
  const double h = T / static_cast<double>(n);
  const Index d = model.dimension;
  const Vec& eq = model.equilibrium;
  const Vec w0 = u0 - eq;

  // deviation iterate; the zeroth iterate is the constant w0
  OrbitGrid prev;
  prev.times.resize(n + 1);
  for (Index j = 0; j <= n; ++j) prev.times[j] = j == n ? T : static_cast<double>(j) * h;
  prev.states = w0.replicate(1, n + 1);
  prev.derivatives = Mat::Zero(d, n + 1);

  PicardResult res;
  for (int it = 1; it <= max_iter; ++it) {
    // w' = A(t) w + f(t), A(t) = DF(eq + p(t)), f = F(eq + p) - A p, p the previous iterate
    auto rhs = [&](double t, const Vec& w) -> Vec {
      const Vec p = prev.state_at(t);
      const Mat A = model.jacobian(eq + p);
      return A * (w - p) + model.field(eq + p);
    };
    OrbitGrid next = prev;
    Vec w = w0;
    next.states.col(0) = w;
    next.derivatives.col(0) = rhs(0.0, w);
    for (Index j = 0; j < n; ++j) {
      const double t = prev.times[j], te = prev.times[j + 1], hs = te - t;
      const Vec k1 = rhs(t, w);
      const Vec k2 = rhs(t + 0.5 * hs, w + 0.5 * hs * k1);
      const Vec k3 = rhs(t + 0.5 * hs, w + 0.5 * hs * k2);
      const Vec k4 = rhs(te, w + hs * k3);
      w += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!w.allFinite()) throw NumericalFailure("picard_solve: non-finite iterate");
      next.states.col(j + 1) = w;
      next.derivatives.col(j + 1) = rhs(te, w);
    }
    double inc = 0.0;
    for (Index j = 0; j <= n; ++j) inc = std::max(inc, (next.states.col(j) - prev.states.col(j)).norm());
    res.increments.push_back(inc);
    res.iterations = it;
    prev = std::move(next);
    const std::size_t k = res.increments.size();
    if (k >= 2 && res.increments[k - 2] > 0.0) {
      const double ratio = inc / res.increments[k - 2];
      res.contraction = std::max(res.contraction, ratio);
      if (inc > tol && it >= 3 && ratio >= 1.0) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "picard_solve: no contraction at this T (ratio " << ratio << " at iteration " << it << ")";
        throw NumericalFailure(msg.str());
      }
    }
    if (inc <= tol) break;
    if (it == max_iter) throw NumericalFailure("picard_solve: iteration limit reached before tolerance");
  }
  res.orbit = prev;
  res.orbit.states.colwise() += eq;
  return res;
}

VariationalFlow variational_flow(const ModelSystem& model, const OrbitGrid& orbit, double dt, double tol) {
  const Index n = orbit.nodes();
  if (n < 2) throw InvalidInput("variational_flow: orbit needs at least two nodes");
  if (orbit.dimension() != model.dimension) throw InvalidInput("variational_flow: dimension mismatch");

  OrbitGrid path = orbit;
  Mat F(model.dimension, n);
  for (Index j = 0; j < n; ++j) F.col(j) = model.field(orbit.states.col(j));
  Mat deriv = orbit.derivatives;
  if (!orbit.has_derivatives()) {
    deriv.resize(model.dimension, n);
    for (Index j = 0; j < n; ++j) {
      const Index a = j == 0 ? 0 : j - 1, b = j == n - 1 ? n - 1 : j + 1;
      deriv.col(j) = (orbit.states.col(b) - orbit.states.col(a)) / (orbit.times[b] - orbit.times[a]);
    }
  }
  for (Index j = 0; j < n; ++j) {
    const double scale = std::max(1.0, F.col(j).norm());
    if ((deriv.col(j) - F.col(j)).norm() > tol * scale) throw InvalidInput("variational_flow: not a trajectory");
  }
  path.derivatives = F;

  VariationalFlow vf;
  vf.times = orbit.times;
  Mat U = Mat::Identity(model.dimension, model.dimension);
  vf.U.push_back(U);
  auto A = [&](double t) { return model.jacobian(path.state_at(t)); };
  for (Index j = 0; j + 1 < n; ++j) {
    const double t0 = orbit.times[j], t1 = orbit.times[j + 1];
    const Index m = step_count(t1 - t0, dt);
    const double hs = (t1 - t0) / static_cast<double>(m);
    for (Index i = 0; i < m; ++i) {
      const double t = t0 + static_cast<double>(i) * hs;
      const double te = i + 1 == m ? t1 : t + hs;
      const Mat Aa = A(t), Am = A(t + 0.5 * hs), Ab = A(te);
      const Mat k1 = Aa * U;
      const Mat k2 = Am * (U + 0.5 * hs * k1);
      const Mat k3 = Am * (U + 0.5 * hs * k2);
      const Mat k4 = Ab * (U + hs * k3);
      U += (hs / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    vf.U.push_back(U);
  }
  return vf;
}

}  // namespace lpm
