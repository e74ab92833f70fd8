#pragma once

// Independent references used to validate the LP machinery.

#include "lpm/linear_analysis.hpp"
#include "lpm/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

namespace lpm {

struct ShootingResult {
  Vec base_point;      // X_+ coordinates at t = 0
  Vec matched_value;   // complement coordinates at t = 0
  double T = 0.0;
  double match_residual = 0.0;
  double budget = 0.0;  // |z(dt) - z(dt/2)| of the final shoot
  int iterations = 0;
};

// Solves Pi_+ u(0) = target over initial data (p, 0) at t = -T (split
// coordinates), RK4 forward with step dt, damped Newton on p.
ShootingResult backward_shoot(const ModelSystem& model, const SpectralSplitting& s, const Vec& target_plus, double T,
                              double tol = 1e-13, double dt = 0.004);

Mat finite_difference_jacobian(const VectorField& F, const Vec& u, double h_step);

// Roots of x^4 + (c+^2 + c-^2 - 2c^2) x^2 + (c+ c- - c^2)^2, sorted by (Re, Im).
template <typename Real>
std::array<std::complex<Real>, 4> quartic_roots(Real c_plus, Real c_minus, Real c) {
  using C = std::complex<Real>;
  const Real D = c_plus * c_plus + c_minus * c_minus - Real(2) * c * c;
  const Real E = c_plus * c_minus - c * c;
  const Real disc = D * D - Real(4) * E * E;
  std::array<C, 2> mu;
  if (disc >= Real(0)) {
    const Real sq = std::sqrt(disc);
    const Real q = -Real(0.5) * (D + (D >= Real(0) ? sq : -sq));
    mu[0] = C(q);
    mu[1] = q != Real(0) ? C(E * E / q) : C(Real(0));
  } else {
    const C sq(Real(0), std::sqrt(-disc));
    mu[0] = Real(0.5) * (C(-D) + sq);
    mu[1] = Real(0.5) * (C(-D) - sq);
  }
  auto root = [](const C& m) {
    if (m.imag() == Real(0)) return m.real() >= Real(0) ? C(std::sqrt(m.real())) : C(Real(0), std::sqrt(-m.real()));
    return std::sqrt(m);
  };
  std::array<C, 4> r{root(mu[0]), -root(mu[0]), root(mu[1]), -root(mu[1])};
  std::sort(r.begin(), r.end(), [](const C& a, const C& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return r;
}

// Dense Kronecker solve of A^T L + L A - 2 omega L = -I.
Mat lyapunov_kronecker(const Mat& A, double omega);

// Exact manifolds of the saddle toys: value of the graph over the X_+ coordinate.
double analytic_manifold(const std::string& model, const std::string& side, double s);

}  // namespace lpm
