#include "lpm/graded_space.hpp"

#include <algorithm>
#include <cmath>

namespace lpm {

NormLadder NormLadder::fourier(Vec wavenumber_sq, double order_per_level) {
  if ((wavenumber_sq.array() < 0.0).any())
    throw InvalidInput("NormLadder: squared wavenumbers must be nonnegative");
  if (order_per_level < 0.0) throw InvalidInput("NormLadder: order per level must be nonnegative");
  return {std::move(wavenumber_sq), order_per_level};
}

Vec NormLadder::weights(double r) const {
  Vec w(size());
  for (Index i = 0; i < size(); ++i) w[i] = weight(i, r);
  return w;
}

OrbitGrid OrbitGrid::backward_uniform(Index dimension, double T_max, double dt) {
  if (!(dt > 0.0) || !(T_max > dt)) throw InvalidInput("OrbitGrid: need 0 < dt < T_max");
  const auto steps = static_cast<Index>(std::llround(T_max / dt));
  if (std::abs(steps * dt - T_max) > 1e-9 * T_max)
    throw InvalidInput("OrbitGrid: T_max must be an integer multiple of dt");
  OrbitGrid g;
  g.times.resize(steps + 1);
  for (Index j = 0; j <= steps; ++j) g.times[j] = -T_max + static_cast<double>(j) * dt;
  g.times[steps] = 0.0;
  g.states = Mat::Zero(dimension, steps + 1);
  return g;
}

Vec OrbitGrid::state_at(double t) const {
  const Index n = nodes();
  if (n == 0) throw InvalidInput("OrbitGrid: empty orbit");
  if (n == 1) return states.col(0);
  const bool increasing = times[n - 1] > times[0];
  const double lo = increasing ? times[0] : times[n - 1];
  const double hi = increasing ? times[n - 1] : times[0];
  const double slack = 1e-12 * std::max(1.0, hi - lo);
  if (t < lo - slack || t > hi + slack) throw InvalidInput("OrbitGrid: time outside the orbit hull");

  // first node index j with t between times[j] and times[j+1]
  const double* begin = times.data();
  const double* end = begin + n;
  Index j;
  if (increasing) {
    j = static_cast<Index>(std::upper_bound(begin, end, t) - begin) - 1;
  } else {
    j = static_cast<Index>(std::upper_bound(begin, end, t, std::greater<double>()) - begin) - 1;
  }
  j = std::clamp<Index>(j, 0, n - 2);

  const double h = times[j + 1] - times[j];
  const double s = (t - times[j]) / h;
  if (!has_derivatives()) return (1.0 - s) * states.col(j) + s * states.col(j + 1);

  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * states.col(j) + (h10 * h) * derivatives.col(j) + h01 * states.col(j + 1) +
         (h11 * h) * derivatives.col(j + 1);
}

double weighted_orbit_norm(const OrbitGrid& orbit, double lambda, const NormLadder& ladder, double r) {
  if (orbit.nodes() == 0) throw InvalidInput("weighted_orbit_norm: empty orbit");
  double best = 0.0;
  for (Index j = 0; j < orbit.nodes(); ++j) {
    const double w = std::exp(-lambda * orbit.times[j]) * graded_norm(orbit.states.col(j), ladder, r);
    best = std::max(best, w);
  }
  return best;
}

double ProjectionPair::consistency_defect() const {
  const Index n = projector_plus.rows();
  const Mat I = Mat::Identity(n, n);
  const double sum = (projector_plus + projector_rest - I).cwiseAbs().maxCoeff();
  const double idem = (projector_plus * projector_plus - projector_plus).cwiseAbs().maxCoeff();
  const double cross = (projector_plus * projector_rest).cwiseAbs().maxCoeff();
  return std::max({sum, idem, cross});
}

}  // namespace lpm
