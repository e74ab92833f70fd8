#pragma once

// Flat-state water-wave and two-fluid interface multipliers.
//
// Wavenumber vectors are 2-d (d = 2 horizontal dimensions suffice for every
// scan here; use a zero second component for 1-d problems). Depth
// std::numeric_limits<double>::infinity() selects the deep-water branch.

#include "lpm/types.hpp"

#include <cmath>
#include <limits>
#include <optional>

namespace lpm {

using Wavevector = Eigen::Vector2d;

// tanh(h k), saturating to 1 for large or infinite h k
template <typename Real>
Real stable_tanh(Real x) {
  if (std::isinf(x)) return x > 0 ? Real(1) : Real(-1);
  if (std::abs(x) > Real(20)) return x > 0 ? Real(1) : Real(-1);
  return std::tanh(x);
}

// |k| tanh(h0 |k|)
template <typename Real>
Real dn_flat_symbol(Real k, Real h0) {
  if (!(k >= Real(0))) throw InvalidInput("dn_flat_symbol: wavenumber must be nonnegative");
  if (!(h0 > Real(0))) throw InvalidInput("dn_flat_symbol: depth must be positive");
  if (k == Real(0)) return Real(0);
  if (std::isinf(h0)) return k;
  return k * stable_tanh(h0 * k);
}

// tau / tanh(h tau), with the tau -> 0 limit 1/h
template <typename Real>
Real tau_over_tanh(Real tau, Real h) {
  if (std::isinf(h)) return tau;
  if (tau == Real(0)) return Real(1) / h;
  const Real x = h * tau;
  if (std::abs(x) < Real(1e-6)) return (Real(1) + x * x / Real(3)) / h;
  return tau / stable_tanh(x);
}

struct OneFluidConfig {
  double g = 1.0;
  double sigma = 1.0;
  double h0 = std::numeric_limits<double>::infinity();
  Wavevector c_vec = Wavevector::Zero();

  void validate() const;
};

struct TwoFluidConfig {
  double rho_plus = 1.0, rho_minus = 1.0;
  Wavevector nu_plus = Wavevector::Zero(), nu_minus = Wavevector::Zero();
  double h_plus = std::numeric_limits<double>::infinity();
  double h_minus = std::numeric_limits<double>::infinity();
  double g = 0.0;
  double sigma = 1.0;

  void validate() const;
};

// m(xi) = -(c . xi)^2 / (|xi| tanh(h0 |xi|)) + g + sigma |xi|^2
double capillary_multiplier(const Wavevector& xi, const OneFluidConfig& cfg);

struct FroudeBond {
  double froude = 0.0;
  double bond = 0.0;
  bool coercive = false;
};

FroudeBond froude_bond(const OneFluidConfig& cfg);

// sigma |xi|^2 + g (rho_- - rho_+) - sum rho (nu . xi)^2 / (|xi| tanh(h |xi|))
double kh_rt_multiplier(const Wavevector& xi, const TwoFluidConfig& cfg);

struct KhBound {
  double bound = 0.0;
  double tau_min = 0.0;
  std::optional<double> closed_form;  // both depths infinite
};

// min over tau > 0 of sigma tau^2 + g(rho_- - rho_+) - sum rho |nu|^2 tau / tanh(h tau)
KhBound kh_bound(const TwoFluidConfig& cfg);

// Same minimisation by golden-section search even when both depths are infinite.
double kh_bound_search(const TwoFluidConfig& cfg, double* tau_at_min = nullptr);

// int eta (Phi1_x Phi2_x - G(0)Phi1 G(0)Phi2) over one period of length `period`
// (1-d, uniform periodic grid, power-of-two length).
double dn_shape_derivative_flat(const Vec& eta, const Vec& phi1, const Vec& phi2, double h0, double period);

struct CoercivityScan {
  double min_value = 0.0;
  double k_at_min = 0.0;
  Index negative_count = 0;
};

// capillary multiplier along xi = k c_hat (or the x-axis when c = 0) on a log grid
CoercivityScan capillary_scan(const OneFluidConfig& cfg, double k_min, double k_max, Index points);

}  // namespace lpm
