#include "lpm/models.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>

namespace lpm {

namespace {

double fpow(int k, double e) { return k == 0 ? 0.0 : std::pow(std::abs(static_cast<double>(k)), e); }

// index lookup for a finite integer mode set
struct ModeIndex {
  int lo = 0;
  std::vector<Index> slot;  // -1 when absent

  explicit ModeIndex(const std::vector<int>& modes) {
    lo = *std::min_element(modes.begin(), modes.end());
    const int hi = *std::max_element(modes.begin(), modes.end());
    slot.assign(static_cast<std::size_t>(hi - lo + 1), -1);
    for (std::size_t i = 0; i < modes.size(); ++i) slot[static_cast<std::size_t>(modes[i] - lo)] = static_cast<Index>(i);
  }
  Index operator()(int k) const {
    const long off = static_cast<long>(k) - lo;
    if (off < 0 || off >= static_cast<long>(slot.size())) return -1;
    return slot[static_cast<std::size_t>(off)];
  }
};

}  // namespace

std::vector<int> MmtParams::modes() const {
  if (!mode_set.empty()) return mode_set;
  std::vector<int> m;
  for (int k = xi0 - radius; k <= xi0 + radius; ++k) m.push_back(k);
  return m;
}

void MmtParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidInput("mmt: alpha must be positive");
  if (!(beta > 0.0) || !(beta <= alpha)) throw InvalidInput("mmt: need 0 < beta <= alpha");
  if (sigma != 1.0 && sigma != -1.0) throw InvalidInput("mmt: sigma must be +1 or -1");
  if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidInput("mmt: amplitude a must be finite and nonnegative");
  if (mode_set.empty() && radius < 0) throw InvalidInput("mmt: mode radius must be nonnegative");
  const auto m = modes();
  if (m.size() > 64) throw InvalidInput("mmt: mode set too large (at most 64 modes)");
  if (std::set<int>(m.begin(), m.end()).size() != m.size()) throw InvalidInput("mmt: duplicate modes");
  if (std::find(m.begin(), m.end(), xi0) == m.end()) throw InvalidInput("mmt: carrier mode xi0 must be in the mode set");
}

double mmt_plane_wave_frequency(const MmtParams& p) {
  return -fpow(p.xi0, 2.0 * p.alpha) - p.sigma * p.a * p.a * fpow(p.xi0, 4.0 * p.beta);
}

ModePairBlock mmt_block(const MmtParams& p, int xi) {
  if (xi == p.xi0) throw InvalidInput("mmt_block: degenerate pair (xi = xi0)");
  if (!(p.a >= 0.0)) throw InvalidInput("mmt_block: amplitude must be nonnegative");
  const double w = mmt_plane_wave_frequency(p);
  const int eta = 2 * p.xi0 - xi;
  const double s = p.sigma * p.a * p.a * fpow(p.xi0, 2.0 * p.beta);
  ModePairBlock b;
  b.c = s * fpow(xi, p.beta) * fpow(eta, p.beta);
  b.c_plus = w + fpow(xi, 2.0 * p.alpha) + 2.0 * s * fpow(xi, 2.0 * p.beta);
  b.c_minus = w + fpow(eta, 2.0 * p.alpha) + 2.0 * s * fpow(eta, 2.0 * p.beta);
  // b+' = -i(c+ b+ + c conj(b-)), b-' = -i(c- b- + c conj(b+))
  b.block = Mat{{0.0, b.c_plus, 0.0, -b.c},
                {-b.c_plus, 0.0, -b.c, 0.0},
                {0.0, -b.c, 0.0, b.c_minus},
                {-b.c, 0.0, -b.c_minus, 0.0}};
  return b;
}

std::vector<ScanRow> mmt_unstable_scan(const MmtParams& p, int xi_min, int xi_max) {
  if (xi_max < xi_min) throw InvalidInput("mmt_unstable_scan: empty range");
  std::vector<ScanRow> rows;
  for (int xi = xi_min; xi <= xi_max; ++xi) {
    if (xi == p.xi0) continue;
    const ModePairBlock b = mmt_block(p, xi);
    ScanRow r;
    r.xi = xi;
    r.discriminant = b.c_plus * b.c_plus + b.c_minus * b.c_minus - 2.0 * b.c * b.c;
    r.flagged = r.discriminant < 0.0;
    Eigen::EigenSolver<Mat> es(b.block, false);
    r.max_real_part = es.eigenvalues().real().maxCoeff();
    rows.push_back(r);
  }
  return rows;
}

ModelSystem mmt_galerkin(const MmtParams& p) {
  p.validate();
  const std::vector<int> modes = p.modes();
  const Index N = static_cast<Index>(modes.size());
  const ModeIndex index(modes);
  const double w = mmt_plane_wave_frequency(p);
  const double sigma = p.sigma;

  Vec mult(N), disp(N), k2(N);
  for (Index i = 0; i < N; ++i) {
    mult[i] = fpow(modes[i], p.beta);
    disp[i] = fpow(modes[i], 2.0 * p.alpha) + w;
    k2[i] = static_cast<double>(modes[i]) * modes[i];
  }
  // (k, k1, k2) -> k3 = k - k1 + k2 index table, -1 if absent
  std::vector<Index> k3tab(static_cast<std::size_t>(N * N * N), -1);
  for (Index k = 0; k < N; ++k)
    for (Index i1 = 0; i1 < N; ++i1)
      for (Index i2 = 0; i2 < N; ++i2)
        k3tab[static_cast<std::size_t>((k * N + i1) * N + i2)] = index(modes[k] - modes[i1] + modes[i2]);

  auto unpack = [N](const Vec& x) {
    CVec v(N);
    for (Index i = 0; i < N; ++i) v[i] = Complex(x[2 * i], x[2 * i + 1]);
    return v;
  };
  auto nonlinear = [N, k3tab](const CVec& W) {
    CVec out = CVec::Zero(N);
    for (Index k = 0; k < N; ++k) {
      Complex acc = 0.0;
      for (Index i1 = 0; i1 < N; ++i1)
        for (Index i2 = 0; i2 < N; ++i2) {
          const Index i3 = k3tab[static_cast<std::size_t>((k * N + i1) * N + i2)];
          if (i3 >= 0) acc += W[i1] * std::conj(W[i2]) * W[i3];
        }
      out[k] = acc;
    }
    return out;
  };

  ModelSystem m;
  m.name = "mmt";
  m.dimension = 2 * N;
  m.equilibrium = Vec::Zero(2 * N);
  m.equilibrium[2 * index(p.xi0)] = p.a;
  // level r carries the H^{r alpha} weight relative to the base space
  Vec ladder_k2(2 * N);
  for (Index i = 0; i < N; ++i) ladder_k2[2 * i] = ladder_k2[2 * i + 1] = k2[i];
  m.ladder = NormLadder::fourier(ladder_k2, 2.0 * p.alpha);

  m.field = [=](const Vec& x) -> Vec {
    const CVec v = unpack(x);
    const CVec W = mult.cwiseProduct(v);
    const CVec Nl = nonlinear(W);
    Vec f(2 * N);
    for (Index k = 0; k < N; ++k) {
      const Complex fk = Complex(0.0, -1.0) * (disp[k] * v[k] + sigma * mult[k] * Nl[k]);
      f[2 * k] = fk.real();
      f[2 * k + 1] = fk.imag();
    }
    return f;
  };

  m.jacobian = [=](const Vec& x) -> Mat {
    const CVec v = unpack(x);
    const CVec W = mult.cwiseProduct(v);
    // P_kj = 2 sum_{k2} conj(W_k2) W_{k-j+k2},  Q_kj = sum_{k1} W_k1 W_{k+j-k1}
    CMat P = CMat::Zero(N, N), Q = CMat::Zero(N, N);
    for (Index k = 0; k < N; ++k)
      for (Index j = 0; j < N; ++j)
        for (Index i = 0; i < N; ++i) {
          const Index ip = k3tab[static_cast<std::size_t>((k * N + j) * N + i)];  // k - j + k_i
          if (ip >= 0) P(k, j) += 2.0 * std::conj(W[i]) * W[ip];
          const Index iq = k3tab[static_cast<std::size_t>((k * N + i) * N + j)];  // k - k_i + j
          if (iq >= 0) Q(k, j) += W[i] * W[iq];
        }
    const Complex mi(0.0, -1.0);
    Mat J(2 * N, 2 * N);
    for (Index k = 0; k < N; ++k)
      for (Index j = 0; j < N; ++j) {
        const double mm = sigma * mult[k] * mult[j];
        const Complex M = mi * ((k == j ? disp[k] : 0.0) + mm * P(k, j));
        const Complex K = mi * (mm * Q(k, j));
        J(2 * k, 2 * j) = M.real() + K.real();
        J(2 * k, 2 * j + 1) = -M.imag() + K.imag();
        J(2 * k + 1, 2 * j) = M.imag() + K.imag();
        J(2 * k + 1, 2 * j + 1) = M.real() - K.real();
      }
    return J;
  };

  // H = sum 1/2 (|k|^{2 alpha} + omega)|v_k|^2 + sigma/4 sum N_k conj(W_k); F = J grad H
  m.energy = [=](const Vec& x) -> double {
    const CVec v = unpack(x);
    const CVec W = mult.cwiseProduct(v);
    const CVec Nl = nonlinear(W);
    double h = 0.0;
    for (Index k = 0; k < N; ++k) h += 0.5 * disp[k] * std::norm(v[k]) + 0.25 * sigma * (Nl[k] * std::conj(W[k])).real();
    return h;
  };
  m.hessian_form = [N, J = m.jacobian](const Vec& x) -> Mat {
    // -J_sympl * DF with J_sympl = [[0, 1], [-1, 0]] per mode
    const Mat D = J(x);
    Mat H(2 * N, 2 * N);
    for (Index k = 0; k < N; ++k) {
      H.row(2 * k) = -D.row(2 * k + 1);
      H.row(2 * k + 1) = D.row(2 * k);
    }
    return H;
  };
  return m;
}

}  // namespace lpm
