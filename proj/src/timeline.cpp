#include "lpm/linear_analysis.hpp"

#include <algorithm>
#include <cmath>

namespace lpm {

Timeline Timeline::autonomous(Mat A, double t_lo, double t_hi) {
  if (A.rows() != A.cols()) throw InvalidInput("Timeline: operator must be square");
  Timeline tl;
  tl.dim_ = A.rows();
  tl.A0_ = std::move(A);
  tl.constant_ = true;
  tl.t_lo_ = t_lo;
  tl.t_hi_ = t_hi;
  return tl;
}

Timeline Timeline::from_function(OperatorFn A, double t_lo, double t_hi) {
  if (!(t_hi > t_lo)) throw InvalidInput("Timeline: times must be strictly increasing");
  Timeline tl;
  tl.fn_ = std::move(A);
  tl.t_lo_ = t_lo;
  tl.t_hi_ = t_hi;
  tl.dim_ = tl.fn_(t_lo).rows();
  return tl;
}

Timeline Timeline::along_orbit(const ModelSystem& model, const OrbitGrid& orbit) {
  const Index n = orbit.nodes();
  if (n < 2) throw InvalidInput("Timeline: orbit needs at least two nodes");
  for (Index j = 0; j + 1 < n; ++j)
    if (!(orbit.times[j + 1] > orbit.times[j])) throw InvalidInput("Timeline: times must be strictly increasing");
  OrbitGrid linear;
  linear.times = orbit.times;
  linear.states = orbit.states;
  Timeline tl;
  tl.orbit_ = linear;
  tl.has_orbit_ = true;
  tl.t_lo_ = orbit.times[0];
  tl.t_hi_ = orbit.times[n - 1];
  tl.dim_ = orbit.dimension();
  tl.fn_ = [model, linear](double t) -> Mat { return model.jacobian(model.equilibrium + linear.state_at(t)); };
  return tl;
}

bool Timeline::contains(double t) const {
  const double slack = 1e-12 * std::max(1.0, std::abs(t));
  return t >= t_lo_ - slack && t <= t_hi_ + slack;
}

Mat Timeline::operator_at(double t) const {
  if (!contains(t)) throw InvalidInput("Timeline: time outside the timeline hull");
  return constant_ ? A0_ : fn_(std::clamp(t, t_lo_, t_hi_));
}

double Timeline::variation(double t0, double t1) const {
  if (!has_orbit_ || t0 == t1) return 0.0;
  const double a = std::min(t0, t1), b = std::max(t0, t1);
  std::vector<double> pts{a};
  for (Index j = 0; j < orbit_.nodes(); ++j)
    if (orbit_.times[j] > a && orbit_.times[j] < b) pts.push_back(orbit_.times[j]);
  pts.push_back(b);
  double acc = 0.0;
  Vec prev = orbit_.state_at(pts[0]);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    Vec cur = orbit_.state_at(pts[i]);
    acc += (cur - prev).norm();
    prev = std::move(cur);
  }
  return acc;
}

namespace {

double inf_norm(const Mat& A) { return A.size() ? A.cwiseAbs().rowwise().sum().maxCoeff() : 0.0; }

template <typename State>
State evolve_impl(const Timeline& tl, const State& x0, double t0, double t1, double dt) {
  if (!(dt > 0.0)) throw InvalidInput("evolve: dt must be positive");
  if (!tl.contains(t0) || !tl.contains(t1)) throw InvalidInput("evolve: time outside the timeline hull");
  if (x0.rows() != tl.dimension()) throw InvalidInput("evolve: dimension mismatch");
  if (t0 == t1) return x0;
  const double span = std::abs(t1 - t0);
  double anorm = inf_norm(tl.operator_at(t0));
  if (!tl.is_autonomous())
    anorm = std::max({anorm, inf_norm(tl.operator_at(0.5 * (t0 + t1))), inf_norm(tl.operator_at(t1))});
  double h = dt;
  if (anorm * h > 0.1) h = 0.1 / anorm;
  const auto n = static_cast<Index>(std::ceil(span / h - 1e-9));
  const double step = (t1 - t0) / static_cast<double>(n);

  State x = x0;
  if (tl.is_autonomous()) {
    const Mat A = tl.operator_at(t0);
    for (Index j = 0; j < n; ++j) {
      const State k1 = A * x;
      const State k2 = A * (x + 0.5 * step * k1);
      const State k3 = A * (x + 0.5 * step * k2);
      const State k4 = A * (x + step * k3);
      x += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
  }
  Mat Aa = tl.operator_at(t0);
  for (Index j = 0; j < n; ++j) {
    const double t = t0 + static_cast<double>(j) * step;
    const double te = j + 1 == n ? t1 : t + step;
    const Mat Am = tl.operator_at(t + 0.5 * step);
    const Mat Ab = tl.operator_at(te);
    const State k1 = Aa * x;
    const State k2 = Am * (x + 0.5 * step * k1);
    const State k3 = Am * (x + 0.5 * step * k2);
    const State k4 = Ab * (x + step * k3);
    x += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    Aa = Ab;
  }
  return x;
}

}  // namespace

Vec evolve(const Timeline& tl, const Vec& v0, double t0, double t1, double dt) {
  return evolve_impl<Vec>(tl, v0, t0, t1, dt);
}

Mat evolve_matrix(const Timeline& tl, const Mat& M0, double t0, double t1, double dt) {
  return evolve_impl<Mat>(tl, M0, t0, t1, dt);
}

}  // namespace lpm
