#include "lpm/model.hpp"

#include <cmath>

namespace lpm {

ModelSystem time_reversed(const ModelSystem& m) {
  ModelSystem r = m;
  r.name = m.name + "-reversed";
  r.field = [F = m.field](const Vec& u) -> Vec { return -F(u); };
  r.jacobian = [J = m.jacobian](const Vec& u) -> Mat { return -J(u); };
  return r;
}

Vec rk4_step(const VectorField& F, const Vec& u, double h) {
  const Vec k1 = F(u);
  const Vec k2 = F(u + 0.5 * h * k1);
  const Vec k3 = F(u + 0.5 * h * k2);
  const Vec k4 = F(u + h * k3);
  return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vec rk4_flow(const VectorField& F, const Vec& u0, double T, double dt) {
  if (!(dt > 0.0)) throw InvalidInput("rk4_flow: dt must be positive");
  if (T == 0.0) return u0;
  const auto n = static_cast<Index>(std::ceil(std::abs(T) / dt - 1e-9));
  const double h = T / static_cast<double>(n);
  Vec u = u0;
  for (Index j = 0; j < n; ++j) u = rk4_step(F, u, h);
  return u;
}

}  // namespace lpm
