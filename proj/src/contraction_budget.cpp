#include "lpm/lyapunov_perron.hpp"

#include <algorithm>
#include <cmath>

namespace lpm {

ContractionBudget contraction_budget(double C0, double Cf, int k, double lambda_minus, double lambda_plus,
                                     double lambda) {
  if (!(lambda_minus < lambda && lambda < lambda_plus))
    throw InvalidInput("contraction_budget: lambda outside the gap (lambda_-, lambda_+)");
  if (!(C0 > 0.0) || !(Cf >= 0.0) || k < 0) throw InvalidInput("contraction_budget: constants must be positive");

  ContractionBudget b;
  b.C0 = C0, b.Cf = Cf, b.k = k;
  b.lambda_minus = lambda_minus, b.lambda_plus = lambda_plus, b.lambda = lambda;
  const double ck1 = std::pow(C0, 2.0 * (k + 1));
  const double ck = std::pow(C0, 2.0 * k);
  const double dm = lambda - lambda_minus, dp = lambda_plus - lambda;
  b.L1 = ck1 * Cf / dm + ck1 * Cf / dp;
  if (!(b.L1 < 1.0)) return b;

  b.M0 = 2.0 * ck1 / (1.0 - b.L1);
  b.l = 0.5 * (1.0 + b.L1);
  b.M1 = (C0 + Cf) * b.M0;

  // largest eps with 2(k+1)C0^{2(k+1)} M1 eps < min gap and both contraction inequalities
  const double step = 2.0 * (k + 1) * ck1 * b.M1;
  const double eps_step = std::min(dm, dp) / step;
  auto feasible = [&](double eps) {
    const double s1 = step * eps;
    if (!(s1 < std::min(dm, dp))) return false;
    const double line1 = ck1 * Cf / (dm - s1) + ck1 * Cf / (dp - s1);
    const double s2 = 2.0 * k * ck * b.M1 * eps;
    const double num = ck * (C0 * b.M0 * eps + Cf);
    if (!(s2 < std::min(dm, dp))) return false;
    const double line2 = num / (dm - s2) + num / (dp - s2);
    return line1 <= std::min(b.l, 0.5 * (1.0 + b.L1)) && line2 <= b.l;
  };
  double lo = 0.0, hi = eps_step;
  if (feasible(hi * (1.0 - 1e-15))) {
    b.feasible_eps = hi * (1.0 - 1e-15);
    return b;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? lo : hi) = mid;
  }
  if (lo > 0.0) b.feasible_eps = lo;
  return b;
}

}  // namespace lpm
