#include "lpm/oracles.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <sstream>

namespace lpm {

namespace {

struct Shot {
  Vec z;    // z(0)
  Mat Phi;  // dz(0)/dp
};

Shot shoot(const VectorField& G, const MatrixField& DG, Index dim, Index m, const Vec& p, double T, double dt) {
  const auto n = std::max<Index>(1, static_cast<Index>(std::ceil(T / dt - 1e-9)));
  const double h = T / static_cast<double>(n);
  Vec z = Vec::Zero(dim);
  z.head(m) = p;
  Mat Phi = Mat::Zero(dim, m);
  Phi.topRows(m).setIdentity();
  for (Index j = 0; j < n; ++j) {
    const Vec k1 = G(z);
    const Mat K1 = DG(z) * Phi;
    const Vec z2 = z + 0.5 * h * k1;
    const Mat P2 = Phi + 0.5 * h * K1;
    const Vec k2 = G(z2);
    const Mat K2 = DG(z2) * P2;
    const Vec z3 = z + 0.5 * h * k2;
    const Mat P3 = Phi + 0.5 * h * K2;
    const Vec k3 = G(z3);
    const Mat K3 = DG(z3) * P3;
    const Vec z4 = z + h * k3;
    const Mat P4 = Phi + h * K3;
    const Vec k4 = G(z4);
    const Mat K4 = DG(z4) * P4;
    z += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    Phi += (h / 6.0) * (K1 + 2.0 * K2 + 2.0 * K3 + K4);
    if (!z.allFinite()) throw NumericalFailure("backward_shoot: orbit blew up");
  }
  return {z, Phi};
}

}  // namespace

ShootingResult backward_shoot(const ModelSystem& model, const SpectralSplitting& s, const Vec& target_plus, double T,
                              double tol, double dt) {
  const Index m = s.dim_plus, n = model.dimension;
  if (m < 1 || m > 3) throw InvalidInput("backward_shoot: needs 1 <= dim X_+ <= 3");
  if (target_plus.size() != m) throw InvalidInput("backward_shoot: target has the wrong dimension");
  if (!(T > 0.0) || !(dt > 0.0)) throw InvalidInput("backward_shoot: need T > 0 and dt > 0");

  const Vec eq = model.equilibrium;
  const Mat V = s.V, Vinv = s.Vinv;
  VectorField G = [&](const Vec& z) -> Vec { return Vinv * model.field(eq + V * z); };
  MatrixField DG = [&](const Vec& z) -> Mat { return Vinv * model.jacobian(eq + V * z) * V; };

  ShootingResult res;
  res.T = T;
  if (target_plus.norm() == 0.0) {
    res.base_point = target_plus;
    res.matched_value = Vec::Zero(n - m);
    return res;
  }
  const Mat Ap = (Vinv * model.jacobian(eq) * V).topLeftCorner(m, m);
  Vec p = (-T * Ap).exp() * target_plus;
  Shot sh = shoot(G, DG, n, m, p, T, dt);
  Vec r = sh.z.head(m) - target_plus;
  const double scale = std::max(1.0, target_plus.norm());
  int it = 0;
  for (; it < 50 && r.norm() > tol * scale; ++it) {
    const Vec dp = sh.Phi.topRows(m).partialPivLu().solve(r);
    double t = 1.0;
    for (;;) {
      const Vec trial = p - t * dp;
      Shot st = shoot(G, DG, n, m, trial, T, dt);
      const Vec rt = st.z.head(m) - target_plus;
      if (rt.norm() < r.norm() || t < 1e-8) {
        p = trial;
        sh = std::move(st);
        r = rt;
        break;
      }
      t *= 0.5;
    }
  }
  if (r.norm() > tol * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "backward_shoot: Newton failed after " << it << " iterations, residual " << r.norm();
    throw NumericalFailure(msg.str());
  }
  const Shot fine = shoot(G, DG, n, m, p, T, 0.5 * dt);
  res.base_point = sh.z.head(m);
  res.matched_value = sh.z.tail(n - m);
  res.match_residual = r.norm();
  res.budget = (fine.z - sh.z).norm();
  res.iterations = it;
  return res;
}

Mat finite_difference_jacobian(const VectorField& F, const Vec& u, double h_step) {
  if (!(h_step > 0.0)) throw InvalidInput("finite_difference_jacobian: step must be positive");
  const Index n = u.size();
  const Vec f0 = F(u);
  Mat J(f0.size(), n);
  for (Index j = 0; j < n; ++j) {
    Vec e = Vec::Zero(n);
    e[j] = h_step;
    J.col(j) = (F(u + e) - F(u - e)) / (2.0 * h_step);
  }
  return J;
}

Mat lyapunov_kronecker(const Mat& A, double omega) {
  const Index n = A.rows();
  const Mat B = A - omega * Mat::Identity(n, n);
  const Mat I = Mat::Identity(n, n);
  // vec(B^T L + L B) = (I (x) B^T + B^T (x) I) vec(L)
  const Mat K = Eigen::kroneckerProduct(I, B.transpose()).eval() + Eigen::kroneckerProduct(B.transpose(), I).eval();
  Vec rhs = -Eigen::Map<const Vec>(I.data(), n * n);
  const Vec x = K.fullPivLu().solve(rhs);
  Mat L = Eigen::Map<const Mat>(x.data(), n, n);
  return 0.5 * (L + L.transpose());
}

double analytic_manifold(const std::string& model, const std::string& side, double s) {
  if (model == "saddle1") {
    if (side == "unstable") return s * s / 3.0;
    if (side == "stable") return 0.0;
  } else if (model == "saddle2") {
    if (side == "unstable") return 0.0;
    if (side == "stable") return -s * s / 4.0;
  }
  throw InvalidInput("analytic_manifold: no exact manifold for " + model + " (" + side + ")");
}

}  // namespace lpm
