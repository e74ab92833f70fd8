#include "lpm/lyapunov_perron.hpp"

#include <cmath>
#include <sstream>

namespace lpm {

QuasilinearSystem quasilinearize(const ModelSystem& model, const SpectralSplitting& s, double sigma_scale, int j) {
  if (s.dimension() != model.dimension) throw InvalidInput("quasilinearize: splitting does not match the model");
  if (!(sigma_scale > 0.0)) throw InvalidInput("quasilinearize: sigma scale must be positive");
  const Index n = model.dimension, m = s.dim_plus;
  const double scale = std::pow(sigma_scale, 2 - j);
  const Mat Pp = s.projection.projector_plus, Pr = s.projection.projector_rest;
  const double shift_p = s.omega_plus - 1.0, shift_r = s.omega_minus + 1.0;
  const Vec eq = model.equilibrium;
  const Mat I = Mat::Identity(n, n);

  QuasilinearSystem q;
  q.B = [=, F = model.field](const Vec& u) -> Vec {
    const Vec Fu = F(eq + u);
    return scale * (Pp * (Fu - shift_p * u) + Pr * (Fu - shift_r * u));
  };
  q.DB = [=, J = model.jacobian](const Vec& u) -> Mat {
    const Mat A = J(eq + u);
    return scale * (Pp * (A - shift_p * I) + Pr * (A - shift_r * I));
  };
  const Mat DB0 = q.DB(Vec::Zero(n));
  Eigen::JacobiSVD<Mat> svd(DB0);
  const Vec sv = svd.singularValues();
  q.condition_number = sv[n - 1] > 0.0 ? sv[0] / sv[n - 1] : std::numeric_limits<double>::infinity();
  if (!std::isfinite(q.condition_number) || q.condition_number > 1e12)
    throw NumericalFailure("quasilinearize: DB(0) is not invertible; adjust omega_+-");

  q.invert_B = [B = q.B, DB = q.DB, n](const Vec& v) -> Vec {
    Vec u = Vec::Zero(n);
    Vec res = B(u) - v;
    double rn = res.norm();
    const double target = 1e-14 * std::max(1.0, v.norm());
    for (int it = 0; it < 60 && rn > target; ++it) {
      const Vec delta = DB(u).partialPivLu().solve(res);
      double t = 1.0;
      Vec trial;
      double tn = 0.0;
      for (;;) {
        trial = u - t * delta;
        tn = (B(trial) - v).norm();
        if (tn < (1.0 - 1e-4 * t) * rn || t < 1e-10) break;
        t *= 0.5;
      }
      if (!(tn < rn)) {
        if (rn <= 1e-12) break;
        std::ostringstream msg;
        msg.precision(17);
        msg << "invert_B: Newton stagnated with residual " << rn;
        throw NumericalFailure(msg.str());
      }
      u = trial;
      res = B(u) - v;
      rn = res.norm();
    }
    if (rn > 1e-12) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "invert_B: Newton did not converge, residual " << rn;
      throw NumericalFailure(msg.str());
    }
    return u;
  };

  // v-system: v' = G(v) = DB(u) F(u), A(v) = DF(B^{-1} v), f = G - blockdiag(A) v
  const Mat V = s.V, Vinv = s.Vinv;
  LpSystem& sys = q.system;
  sys.name = model.name + "-quasilinear";
  sys.dim = n;
  sys.dim_plus = m;
  sys.V = V;
  sys.Vinv = Vinv;
  const Mat Lam = Vinv * model.jacobian(eq) * V;
  sys.A_plus = Lam.topLeftCorner(m, m);
  sys.A_rest = Lam.bottomRightCorner(n - m, n - m);
  auto blockdiag = [m, n](const Mat& M) {
    Mat D = Mat::Zero(n, n);
    D.topLeftCorner(m, m) = M.topLeftCorner(m, m);
    D.bottomRightCorner(n - m, n - m) = M.bottomRightCorner(n - m, n - m);
    return D;
  };
  sys.field = [=, F = model.field, DB = q.DB, inv = q.invert_B](const Vec& z) -> Vec {
    const Vec u = inv(V * z);
    return Vinv * (DB(u) * F(eq + u));
  };
  sys.block_operator = [=, J = model.jacobian, inv = q.invert_B](const Vec& z) -> Mat {
    const Vec u = inv(V * z);
    return blockdiag(Vinv * J(eq + u) * V);
  };
  sys.remainder = [G = sys.field, Aop = sys.block_operator](const Vec& z) -> Vec { return G(z) - Aop(z) * z; };
  sys.field_jacobian = [G = sys.field, n](const Vec& z) -> Mat {
    Mat Jm(n, n);
    for (Index k = 0; k < n; ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(z[k]));
      Vec e = Vec::Zero(n);
      e[k] = h;
      Jm.col(k) = (G(z + e) - G(z - e)) / (2.0 * h);
    }
    return Jm;
  };
  sys.remainder_jacobian = [DG = sys.field_jacobian, Lam, blockdiag](const Vec& z) -> Mat {
    return DG(z) - blockdiag(Lam);
  };
  sys.ladder = model.ladder;
  sys.lambda_plus = s.lambda_plus;
  sys.lambda_minus = m < n ? s.rest_abscissa : -s.gap;
  if (s.dim_center > 0) sys.lambda_minus = std::max(sys.lambda_minus, 0.0);
  return q;
}

}  // namespace lpm
