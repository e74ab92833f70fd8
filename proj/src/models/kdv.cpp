#include "lpm/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lpm {

double kdv_energy(double phi, double phi_x, double c, double p, double a) {
  return 0.5 * (1.0 + a * phi * phi) * phi_x * phi_x - 0.5 * c * phi * phi +
         std::pow(std::abs(phi), p + 1.0) / (p + 1.0);
}

KdvProfile kdv_wave_profile(double c, double p, double a, const Vec& x_grid) {
  if (!(c > 0.0)) throw InvalidInput("kdv_wave_profile: speed c must be positive");
  if (!(p > 1.0)) throw InvalidInput("kdv_wave_profile: power p must exceed 1");
  if (!(a >= 0.0)) throw InvalidInput("kdv_wave_profile: metric coefficient a must be nonnegative");
  if (!x_grid.allFinite()) throw InvalidInput("kdv_wave_profile: non-finite grid");

  KdvProfile out;
  out.phi_max = std::pow(0.5 * c * (p + 1.0), 1.0 / (p - 1.0));
  const double pm = out.phi_max;

  // crest: phi'' = (c phi - phi^p - a phi phi'^2) / (1 + a phi^2), regular at phi_max
  auto second = [&](const Eigen::Vector2d& y) -> Eigen::Vector2d {
    const double f = y[0], g = y[1];
    return {g, (c * f - std::pow(std::abs(f), p) - a * f * g * g) / (1.0 + a * f * f)};
  };
  // flanks: phi' = -sqrt((c phi^2 - 2 phi^{p+1}/(p+1)) / (1 + a phi^2)), stable toward phi -> 0
  auto slope = [&](double f) {
    const double num = c * f * f - 2.0 * std::pow(std::abs(f), p + 1.0) / (p + 1.0);
    return -std::sqrt(std::max(0.0, num) / (1.0 + a * f * f));
  };

  const Index n = x_grid.size();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(),
            [&](Index i, Index j) { return std::abs(x_grid[i]) < std::abs(x_grid[j]); });

  out.x = x_grid;
  out.phi.resize(n);
  out.phi_x.resize(n);
  const double ds_max = 1e-3;
  double s = 0.0;
  Eigen::Vector2d y(pm, 0.0);
  bool crest = true;
  for (Index idx : order) {
    const double target = std::abs(x_grid[idx]);
    if (target > s) {
      const auto steps = static_cast<Index>(std::ceil((target - s) / ds_max));
      const double h = (target - s) / static_cast<double>(steps);
      for (Index k = 0; k < steps; ++k) {
        if (crest) {
          const Eigen::Vector2d k1 = second(y);
          const Eigen::Vector2d k2 = second(y + 0.5 * h * k1);
          const Eigen::Vector2d k3 = second(y + 0.5 * h * k2);
          const Eigen::Vector2d k4 = second(y + h * k3);
          y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
          if (y[0] <= 0.9 * pm) crest = false;
        } else {
          double f = y[0];
          const double k1 = slope(f);
          const double k2 = slope(f + 0.5 * h * k1);
          const double k3 = slope(f + 0.5 * h * k2);
          const double k4 = slope(f + h * k3);
          f += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
          y = {f, slope(f)};
        }
      }
      s = target;
    }
    out.phi[idx] = y[0];
    out.phi_x[idx] = x_grid[idx] < 0.0 ? -y[1] : y[1];
  }
  for (Index i = 0; i < n; ++i)
    out.max_level_residual = std::max(out.max_level_residual, std::abs(kdv_energy(out.phi[i], out.phi_x[i], c, p, a)));
  return out;
}

}  // namespace lpm
