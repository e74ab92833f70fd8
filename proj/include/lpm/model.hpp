#pragma once

#include "lpm/graded_space.hpp"
#include "lpm/types.hpp"

#include <string>

namespace lpm {

// Contract every model implements: u' = F(u), A(u) = DF(u), F(equilibrium) = 0.
struct ModelSystem {
  std::string name;
  Index dimension = 0;
  VectorField field;
  MatrixField jacobian;
  Vec equilibrium;
  NormLadder ladder;
  MatrixField hessian_form;                 // optional: symmetric form of D^2 H
  std::function<double(const Vec&)> energy;  // optional: conserved quantity

  bool has_energy() const { return static_cast<bool>(energy); }

  // Deviation coordinates w = u - equilibrium.
  Vec field_at_deviation(const Vec& w) const { return field(equilibrium + w); }
  Mat jacobian_at_deviation(const Vec& w) const { return jacobian(equilibrium + w); }
};

// Same system with time reversed (F -> -F); stable manifolds are unstable
// manifolds of the reversed flow.
ModelSystem time_reversed(const ModelSystem& m);

// One classical RK4 step of u' = F(u).
Vec rk4_step(const VectorField& F, const Vec& u, double h);

// Fixed-step RK4 over [0, T] (T may be negative).
Vec rk4_flow(const VectorField& F, const Vec& u0, double T, double dt);

}  // namespace lpm
