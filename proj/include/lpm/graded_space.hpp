#pragma once

// Finite-dimensional scale of spaces X^r: coefficient vectors measured with
// per-coordinate weights mu_i(r), plus the exponentially weighted orbit norms
// used by the Lyapunov-Perron iteration.

#include "lpm/types.hpp"

#include <cmath>
#include <string>

namespace lpm {

/// Per-coordinate weights mu_i(r) = (1 + k_i^2)^(order_per_level * r / 2).
///
/// mu_i(0) = 1 for every coordinate and the weights are nondecreasing in r.
/// A ladder with all k_i = 0 is the plain Euclidean norm at every level.
struct NormLadder {
  Vec wavenumber_sq;
  double order_per_level = 0.0;

  static NormLadder uniform(Index n) { return {Vec::Zero(n), 0.0}; }
  static NormLadder fourier(Vec wavenumber_sq, double order_per_level);

  Index size() const { return wavenumber_sq.size(); }

  double weight(Index i, double r) const {
    return std::pow(1.0 + wavenumber_sq[i], 0.5 * order_per_level * r);
  }
  Vec weights(double r) const;
};

/// ||v||_r = sqrt(sum_i mu_i(r)^2 v_i^2).
template <typename Derived>
typename Derived::RealScalar graded_norm(const Eigen::MatrixBase<Derived>& v,
                                         const NormLadder& ladder, double r) {
  using Real = typename Derived::RealScalar;
  if (v.size() != ladder.size())
    throw InvalidInput("graded_norm: vector has length " + std::to_string(v.size()) +
                       " but ladder has " + std::to_string(ladder.size()));
  if (!(r >= 0.0)) throw InvalidInput("graded_norm: level must be nonnegative");
  Real acc(0);
  for (Index i = 0; i < v.size(); ++i) {
    const Real w = Real(ladder.weight(i, r));
    const Real x = std::abs(v[i]) * w;
    acc += x * x;
  }
  return std::sqrt(acc);
}

/// Column-per-node trajectory sample. `derivatives` is optional (empty when
/// absent); when present it holds v'(t_j) and enables Hermite interpolation.
struct OrbitGrid {
  Vec times;
  Mat states;
  Mat derivatives;

  Index nodes() const { return times.size(); }
  Index dimension() const { return states.rows(); }
  bool has_derivatives() const { return derivatives.cols() == states.cols() && derivatives.size() > 0; }

  /// Uniform grid -T_max, -T_max + dt, ..., 0 with zero states.
  static OrbitGrid backward_uniform(Index dimension, double T_max, double dt);

  /// Interpolated state at t (cubic Hermite when derivatives are stored,
  /// linear otherwise). Exact at nodes; times may be increasing or decreasing.
  Vec state_at(double t) const;
};

/// max_j e^{-lambda t_j} ||v(t_j)||_r over the grid.
double weighted_orbit_norm(const OrbitGrid& orbit, double lambda, const NormLadder& ladder, double r);

/// Splitting of the phase space into the distinguished block X_+ and the rest.
///
/// projector_plus + projector_rest = I, both idempotent, and
/// projector_plus * projector_rest = 0 to rounding.
struct ProjectionPair {
  Mat basis_plus;
  Mat basis_rest;
  Mat projector_plus;
  Mat projector_rest;

  /// Largest deviation from I of the sum, from idempotence, and of the cross
  /// product; used by the self-checks.
  double consistency_defect() const;
};

}  // namespace lpm
