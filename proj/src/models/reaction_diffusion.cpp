#include "lpm/models.hpp"

#include <cmath>
#include <numbers>

namespace lpm {

namespace {

// exponential coefficients c_m, m = -(N-1)..(N-1), of u = a_0 + sum a_k cos(kx)
Vec exp_coeffs(const Vec& a) {
  const Index N = a.size();
  Vec c = Vec::Zero(2 * N - 1);
  c[N - 1] = a[0];
  for (Index k = 1; k < N; ++k) c[N - 1 + k] = c[N - 1 - k] = 0.5 * a[k];
  return c;
}

Vec convolve(const Vec& x, const Vec& y) {
  Vec z = Vec::Zero(x.size() + y.size() - 1);
  for (Index i = 0; i < x.size(); ++i)
    for (Index j = 0; j < y.size(); ++j) z[i + j] += x[i] * y[j];
  return z;
}

}  // namespace

ModelSystem reaction_diffusion(double lambda_param, Index n_modes) {
  if (n_modes < 2) throw InvalidInput("reaction_diffusion: need at least 2 modes");
  if (!std::isfinite(lambda_param)) throw InvalidInput("reaction_diffusion: lambda must be finite");
  const Index N = n_modes;
  const double lam = lambda_param;

  Vec k2(N);
  for (Index k = 0; k < N; ++k) k2[k] = static_cast<double>(k * k);

  ModelSystem m;
  m.name = "rd";
  m.dimension = N;
  m.equilibrium = Vec::Zero(N);
  m.ladder = NormLadder::fourier(k2, 2.0);

  m.field = [N, lam, k2](const Vec& a) -> Vec {
    const Vec c = exp_coeffs(a);
    const Vec cube = convolve(convolve(c, c), c);  // offset 3(N-1)
    const Index off = 3 * (N - 1);
    Vec f(N);
    for (Index k = 0; k < N; ++k) {
      const double proj = (k == 0 ? 1.0 : 2.0) * cube[off + k];
      f[k] = (lam - k2[k]) * a[k] - proj;
    }
    return f;
  };

  m.jacobian = [N, lam, k2](const Vec& a) -> Mat {
    const Vec c = exp_coeffs(a);
    const Vec sq = convolve(c, c);  // offset 2(N-1)
    const Index off = 2 * (N - 1);
    auto S = [&](Index idx) { return std::abs(idx) <= off ? sq[off + idx] : 0.0; };
    Mat J = Mat::Zero(N, N);
    for (Index k = 0; k < N; ++k) {
      const double pk = k == 0 ? 1.0 : 2.0;
      for (Index j = 0; j < N; ++j) {
        const double coeff = j == 0 ? 3.0 * S(k) : 1.5 * (S(k - j) + S(k + j));
        J(k, j) = -pk * coeff;
      }
      J(k, k) += lam - k2[k];
    }
    return J;
  };

  // E = int 1/2 u_x^2 - lambda/2 u^2 + u^4/4 over [0, 2pi]; a' = -W^{-1} grad E
  Vec W(N);
  W[0] = 2.0 * std::numbers::pi;
  for (Index k = 1; k < N; ++k) W[k] = std::numbers::pi;
  m.energy = [N, lam, k2, W](const Vec& a) -> double {
    double quad = 0.0;
    for (Index k = 0; k < N; ++k) quad += 0.5 * W[k] * (k2[k] - lam) * a[k] * a[k];
    const Vec c = exp_coeffs(a);
    const Vec sq = convolve(c, c);
    const double quartic = 2.0 * std::numbers::pi * sq.squaredNorm();  // sq is symmetric
    return quad + 0.25 * quartic;
  };
  m.hessian_form = [J = m.jacobian, W](const Vec& a) -> Mat { return -(W.asDiagonal() * J(a)); };
  return m;
}

}  // namespace lpm
