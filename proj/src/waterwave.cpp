#include "lpm/waterwave.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace lpm {

void OneFluidConfig::validate() const {
  if (!(sigma > 0.0)) throw InvalidInput("one-fluid config: surface tension must be positive");
  if (!(h0 > 0.0)) throw InvalidInput("one-fluid config: depth must be positive");
  if (!(g >= 0.0)) throw InvalidInput("one-fluid config: gravity must be nonnegative");
  if (!c_vec.allFinite()) throw InvalidInput("one-fluid config: background velocity must be finite");
}

void TwoFluidConfig::validate() const {
  if (!(rho_plus > 0.0) || !(rho_minus > 0.0)) throw InvalidInput("two-fluid config: densities must be positive");
  if (!(sigma > 0.0)) throw InvalidInput("two-fluid config: surface tension must be positive");
  if (!(h_plus > 0.0) || !(h_minus > 0.0)) throw InvalidInput("two-fluid config: depths must be positive");
  if (!std::isfinite(g)) throw InvalidInput("two-fluid config: gravity must be finite");
  if (!nu_plus.allFinite() || !nu_minus.allFinite()) throw InvalidInput("two-fluid config: velocities must be finite");
}

double capillary_multiplier(const Wavevector& xi, const OneFluidConfig& cfg) {
  cfg.validate();
  const double k = xi.norm();
  if (k == 0.0) throw InvalidInput("capillary_multiplier: xi = 0 (the mode is quotiented)");
  const double cx = cfg.c_vec.dot(xi);
  return -cx * cx / dn_flat_symbol(k, cfg.h0) + cfg.g + cfg.sigma * k * k;
}

FroudeBond froude_bond(const OneFluidConfig& cfg) {
  cfg.validate();
  if (std::isinf(cfg.h0)) throw InvalidInput("froude_bond: Froude undefined for infinite depth");
  if (!(cfg.g > 0.0)) throw InvalidInput("froude_bond: gravity must be positive");
  const double c2 = cfg.c_vec.squaredNorm();
  FroudeBond fb;
  fb.froude = std::sqrt(c2) / std::sqrt(cfg.g * cfg.h0);
  fb.bond = cfg.g * cfg.h0 * cfg.h0 / cfg.sigma;
  fb.coercive = cfg.g * cfg.h0 > c2 && 3.0 * cfg.sigma >= c2 * cfg.h0;
  return fb;
}

double kh_rt_multiplier(const Wavevector& xi, const TwoFluidConfig& cfg) {
  cfg.validate();
  const double k = xi.norm();
  if (k == 0.0) throw InvalidInput("kh_rt_multiplier: xi = 0");
  const double up = cfg.nu_plus.dot(xi), um = cfg.nu_minus.dot(xi);
  return cfg.sigma * k * k + cfg.g * (cfg.rho_minus - cfg.rho_plus) -
         cfg.rho_plus * up * up / dn_flat_symbol(k, cfg.h_plus) - cfg.rho_minus * um * um / dn_flat_symbol(k, cfg.h_minus);
}

namespace {

double kh_profile(double tau, const TwoFluidConfig& c) {
  return c.sigma * tau * tau + c.g * (c.rho_minus - c.rho_plus) -
         c.rho_plus * c.nu_plus.squaredNorm() * tau_over_tanh(tau, c.h_plus) -
         c.rho_minus * c.nu_minus.squaredNorm() * tau_over_tanh(tau, c.h_minus);
}

}  // namespace

double kh_bound_search(const TwoFluidConfig& cfg, double* tau_at_min) {
  cfg.validate();
  const double b = cfg.rho_plus * cfg.nu_plus.squaredNorm() + cfg.rho_minus * cfg.nu_minus.squaredNorm();
  const double tmax = std::max(1.0, b / cfg.sigma);
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, d = tmax;
  double x1 = d - gr * (d - a), x2 = a + gr * (d - a);
  double f1 = kh_profile(x1, cfg), f2 = kh_profile(x2, cfg);
  for (int i = 0; i < 200 && d - a > 1e-15 * tmax; ++i) {
    if (f1 <= f2) {
      d = x2, x2 = x1, f2 = f1;
      x1 = d - gr * (d - a);
      f1 = kh_profile(x1, cfg);
    } else {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + gr * (d - a);
      f2 = kh_profile(x2, cfg);
    }
  }
  double tau = 0.5 * (a + d);
  double best = kh_profile(tau, cfg);
  // endpoints: the tau -> 0+ limit and tau_max
  for (double t : {0.0, tmax}) {
    const double v = kh_profile(t, cfg);
    if (v < best) best = v, tau = t;
  }
  if (tau_at_min) *tau_at_min = tau;
  return best;
}

KhBound kh_bound(const TwoFluidConfig& cfg) {
  cfg.validate();
  KhBound kb;
  if (std::isinf(cfg.h_plus) && std::isinf(cfg.h_minus)) {
    const double b = cfg.rho_plus * cfg.nu_plus.squaredNorm() + cfg.rho_minus * cfg.nu_minus.squaredNorm();
    kb.closed_form = cfg.g * (cfg.rho_minus - cfg.rho_plus) - b * b / (4.0 * cfg.sigma);
    kb.bound = *kb.closed_form;
    kb.tau_min = b / (2.0 * cfg.sigma);
    return kb;
  }
  kb.bound = kh_bound_search(cfg, &kb.tau_min);
  return kb;
}

double dn_shape_derivative_flat(const Vec& eta, const Vec& phi1, const Vec& phi2, double h0, double period) {
  const Index n = eta.size();
  if (phi1.size() != n || phi2.size() != n) throw InvalidInput("dn_shape_derivative_flat: grid length mismatch");
  if (n < 2 || (n & (n - 1)) != 0) throw InvalidInput("dn_shape_derivative_flat: grid length must be a power of two");
  if (!(period > 0.0) || !(h0 > 0.0)) throw InvalidInput("dn_shape_derivative_flat: period and depth must be positive");

  Eigen::FFT<double> fft;
  std::vector<double> wave(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    const Index m = j <= n / 2 ? j : j - n;
    wave[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * static_cast<double>(m) / period;
  }
  auto transforms = [&](const Vec& phi, std::vector<double>& dx, std::vector<double>& dn) {
    std::vector<double> in(phi.data(), phi.data() + n);
    std::vector<Complex> spec;
    fft.fwd(spec, in);
    std::vector<Complex> sd(spec.size()), sg(spec.size());
    for (Index j = 0; j < n; ++j) {
      const auto js = static_cast<std::size_t>(j);
      const double k = wave[js];
      // the Nyquist derivative is set to zero so real input stays real
      sd[js] = j == n / 2 ? Complex(0.0) : Complex(0.0, k) * spec[js];
      sg[js] = dn_flat_symbol(std::abs(k), h0) * spec[js];
    }
    std::vector<Complex> od, og;
    fft.inv(od, sd);
    fft.inv(og, sg);
    dx.resize(static_cast<std::size_t>(n));
    dn.resize(static_cast<std::size_t>(n));
    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) dx[j] = od[j].real(), dn[j] = og[j].real();
  };
  std::vector<double> d1, g1, d2, g2;
  transforms(phi1, d1, g1);
  transforms(phi2, d2, g2);
  double acc = 0.0;
  for (Index j = 0; j < n; ++j) {
    const auto js = static_cast<std::size_t>(j);
    acc += eta[j] * (d1[js] * d2[js] - g1[js] * g2[js]);
  }
  return acc * period / static_cast<double>(n);
}

CoercivityScan capillary_scan(const OneFluidConfig& cfg, double k_min, double k_max, Index points) {
  if (!(k_min > 0.0) || !(k_max > k_min) || points < 2) throw InvalidInput("capillary_scan: bad log grid");
  const double cn = cfg.c_vec.norm();
  const Wavevector dir = cn > 0.0 ? Wavevector(cfg.c_vec / cn) : Wavevector(1.0, 0.0);
  CoercivityScan scan;
  scan.min_value = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < points; ++i) {
    const double k = k_min * std::pow(k_max / k_min, static_cast<double>(i) / (points - 1));
    const double v = capillary_multiplier(k * dir, cfg);
    if (v < scan.min_value) scan.min_value = v, scan.k_at_min = k;
    if (v < 0.0) ++scan.negative_count;
  }
  return scan;
}

}  // namespace lpm
