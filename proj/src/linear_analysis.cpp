#include "lpm/linear_analysis.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lpm {

namespace {

// Swap adjacent diagonal entries k, k+1 of the upper-triangular T, updating Q.
void swap_schur(CMat& T, CMat& Q, Index k) {
  const Complex a = T(k, k), b = T(k + 1, k + 1), t = T(k, k + 1);
  Complex x1 = t, x2 = b - a;
  const double nrm = std::hypot(std::abs(x1), std::abs(x2));
  if (nrm == 0.0) return;
  x1 /= nrm;
  x2 /= nrm;
  Eigen::Matrix2cd G;
  G << x1, -std::conj(x2), x2, std::conj(x1);
  const Index n = T.rows();
  T.middleRows(k, 2) = G.adjoint() * T.middleRows(k, 2);
  T.middleCols(k, 2) = T.middleCols(k, 2) * G;
  Q.middleCols(k, 2) = Q.middleCols(k, 2) * G;
  T(k + 1, k) = 0.0;
  (void)n;
}

// Reorder so that the diagonal entries with selected[i] come first (stable).
CMat leading_invariant_basis(CMat T, CMat Q, std::vector<bool> selected) {
  const Index n = T.rows();
  // bubble selected entries upward
  for (Index i = 0; i < n; ++i) {
    if (!selected[i]) continue;
    for (Index k = i; k > 0 && !selected[k - 1]; --k) {
      swap_schur(T, Q, k - 1);
      std::swap(selected[k - 1], selected[k]);
    }
  }
  const Index m = std::count(selected.begin(), selected.end(), true);
  return Q.leftCols(m);
}

// Real basis of a conjugation-closed complex subspace, normalised so the
// pivot rows form the identity.
Mat canonical_real_basis(const CMat& Qm) {
  const Index n = Qm.rows(), m = Qm.cols();
  if (m == 0) return Mat(n, 0);
  Mat stacked(n, 2 * m);
  stacked << Qm.real(), Qm.imag();
  Eigen::JacobiSVD<Mat> svd(stacked, Eigen::ComputeThinU);
  Mat B = svd.matrixU().leftCols(m);

  Eigen::ColPivHouseholderQR<Mat> qr(B.transpose());
  std::vector<Index> piv(m);
  for (Index i = 0; i < m; ++i) piv[i] = qr.colsPermutation().indices()[i];
  std::sort(piv.begin(), piv.end());
  Mat P(m, m);
  for (Index i = 0; i < m; ++i) P.row(i) = B.row(piv[i]);
  Mat C = B * P.inverse();
  for (Index i = 0; i < m; ++i) {
    C.row(piv[i]).setZero();
    C(piv[i], i) = 1.0;
  }
  return C;
}

double spectral_norm(const Mat& M) {
  if (M.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Mat>(M).singularValues()(0);
}

}  // namespace

SpectralSplitting eigen_split(const Mat& A, double gap) {
  if (A.rows() != A.cols() || A.rows() == 0) throw InvalidInput("eigen_split: matrix must be square and nonempty");
  if (!(gap > 0.0)) throw InvalidInput("eigen_split: gap must be positive");
  if (!A.allFinite()) throw InvalidInput("eigen_split: non-finite matrix entries");
  const Index n = A.rows();

  Eigen::ComplexSchur<CMat> schur(A.cast<Complex>());
  if (schur.info() != Eigen::Success) throw NumericalFailure("eigen_split: Schur decomposition failed");
  const CMat& T = schur.matrixT();
  const CMat& Q = schur.matrixU();

  SpectralSplitting s;
  s.gap = gap;
  s.eigenvalues = T.diagonal();
  s.block.resize(n);
  std::vector<bool> plus(n), rest(n);
  for (Index i = 0; i < n; ++i) {
    const double re = s.eigenvalues[i].real();
    if (std::abs(std::abs(re) - gap) < 0.1 * gap) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "eigen_split: ambiguous split, eigenvalue " << s.eigenvalues[i].real() << (s.eigenvalues[i].imag() < 0 ? "" : "+")
          << s.eigenvalues[i].imag() << "i lies within 0.1*gap of the gap boundary " << gap;
      throw NumericalFailure(msg.str());
    }
    s.block[i] = re > gap ? 1 : (re < -gap ? -1 : 0);
    plus[i] = s.block[i] == 1;
    rest[i] = !plus[i];
  }
  s.dim_plus = std::count(s.block.begin(), s.block.end(), 1);
  s.dim_minus = std::count(s.block.begin(), s.block.end(), -1);
  s.dim_center = n - s.dim_plus - s.dim_minus;

  const Mat Bp = canonical_real_basis(leading_invariant_basis(T, Q, plus));
  const Mat Br = canonical_real_basis(leading_invariant_basis(T, Q, rest));
  s.V.resize(n, n);
  s.V << Bp, Br;
  Eigen::FullPivLU<Mat> lu(s.V);
  if (!lu.isInvertible()) throw NumericalFailure("eigen_split: invariant subspaces are not complementary");
  s.Vinv = lu.inverse();

  const Index m = s.dim_plus;
  ProjectionPair& pp = s.projection;
  pp.basis_plus = Bp;
  pp.basis_rest = Br;
  pp.projector_plus = s.V.leftCols(m) * s.Vinv.topRows(m);
  pp.projector_rest = s.V.rightCols(n - m) * s.Vinv.bottomRows(n - m);

  const double inf = std::numeric_limits<double>::infinity();
  s.lambda_plus = inf;
  s.rest_abscissa = -inf;
  for (Index i = 0; i < n; ++i) {
    const double re = s.eigenvalues[i].real();
    if (plus[i])
      s.lambda_plus = std::min(s.lambda_plus, re);
    else
      s.rest_abscissa = std::max(s.rest_abscissa, re);
  }
  s.omega_plus = m > 0 ? 0.5 * (s.lambda_plus + gap) : gap;
  s.omega_minus = m < n ? 0.5 * (s.rest_abscissa + gap) : 0.5 * gap;
  return s;
}

SymmetryReport hamiltonian_symmetry_check(const Mat& A, double tol) {
  if (A.rows() != A.cols()) throw InvalidInput("hamiltonian_symmetry_check: matrix must be square");
  Eigen::EigenSolver<Mat> es(A, false);
  const CVec ev = es.eigenvalues();
  const Index n = ev.size();
  std::vector<bool> used(n, false);
  SymmetryReport rep;
  // sort by real part so mirrored partners are matched from the outside in
  std::vector<Index> order(n);
  for (Index i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(ev[a].real()) != std::abs(ev[b].real()) ? std::abs(ev[a].real()) > std::abs(ev[b].real())
                                                             : a < b;
  });
  for (Index i : order) {
    if (used[i]) continue;
    const Complex target = -std::conj(ev[i]);
    Index best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < n; ++j) {
      if (used[j] || j == i) continue;
      const double d = std::abs(ev[j] - target);
      if (d < bd) bd = d, best = j;
    }
    const double self = std::abs(ev[i] - target);  // purely imaginary eigenvalues pair with themselves
    if (self <= bd || best < 0) {
      used[i] = true;
      rep.worst_distance = std::max(rep.worst_distance, self);
    } else {
      used[i] = used[best] = true;
      rep.worst_distance = std::max(rep.worst_distance, bd);
    }
  }
  rep.symmetric = rep.worst_distance <= tol;
  return rep;
}

double spectral_abscissa(const Mat& A) {
  Eigen::EigenSolver<Mat> es(A, false);
  return es.eigenvalues().real().maxCoeff();
}

LyapunovForm lyapunov_form(const Mat& A, double omega) {
  if (A.rows() != A.cols() || A.rows() == 0) throw InvalidInput("lyapunov_form: matrix must be square and nonempty");
  const Index n = A.rows();
  const double abscissa = spectral_abscissa(A);
  if (!(omega > abscissa)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "lyapunov_form: spectral abscissa violated (omega = " << omega << ", max Re = " << abscissa << ")";
    throw InvalidInput(msg.str());
  }
  const Mat B = A - omega * Mat::Identity(n, n);
  Eigen::ComplexSchur<CMat> schur(B.cast<Complex>());
  const CMat& T = schur.matrixT();
  const CMat& Q = schur.matrixU();

  // T^H X + X T = -I, column by column; T^H is lower triangular.
  CMat X = CMat::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    CVec rhs = CVec::Zero(n);
    rhs[j] = -1.0;
    for (Index k = 0; k < j; ++k) rhs -= X.col(k) * T(k, j);
    const Complex tjj = T(j, j);
    CVec x(n);
    for (Index i = 0; i < n; ++i) {
      Complex acc = rhs[i];
      for (Index k = 0; k < i; ++k) acc -= std::conj(T(k, i)) * x[k];
      x[i] = acc / (std::conj(T(i, i)) + tjj);
    }
    X.col(j) = x;
  }
  Mat L = (Q * X * Q.adjoint()).real();
  L = 0.5 * (L + L.transpose()).eval();
  return {L, omega};
}

double lyapunov_residual(const Mat& A, const LyapunovForm& f) {
  const Index n = A.rows();
  const Mat R = A.transpose() * f.L + f.L * A - 2.0 * f.omega * f.L + Mat::Identity(n, n);
  return R.cwiseAbs().maxCoeff();
}

double dissipativity_check(const LyapunovForm& form, const Mat& A, double omega) {
  const Mat& L = form.L;
  if (L.rows() != A.rows() || L.cols() != A.cols()) throw InvalidInput("dissipativity_check: dimension mismatch");
  Eigen::LLT<Mat> llt(L);
  if (llt.info() != Eigen::Success) throw InvalidInput("dissipativity_check: L is not positive definite");
  const Mat S = 0.5 * (L * A + A.transpose() * L);
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(S, L, Eigen::EigenvaluesOnly);
  return ges.eigenvalues().maxCoeff() - omega;
}

GrowthReport growth_bound_check(const Timeline& tl, const SpectralSplitting& s,
                                const std::vector<std::pair<double, double>>& samples, double C0, double dt) {
  GrowthReport rep;
  const Index n = s.dimension();
  const Mat& Pp = s.projection.projector_plus;
  const Mat& Pr = s.projection.projector_rest;
  const double c2 = C0 * C0;
  for (const auto& [t, t0] : samples) {
    const Mat U = evolve_matrix(tl, Mat::Identity(n, n), t0, t, dt);
    const double corr = c2 * tl.variation(t0, t);
    if (t <= t0 && s.dim_plus > 0) {
      const double num = spectral_norm(Pp * U * Pp);
      const double den = c2 * std::exp(s.lambda_plus * (t - t0) + corr);
      rep.ratios_plus.push_back(num / den);
      rep.worst_ratio = std::max(rep.worst_ratio, num / den);
    }
    if (t >= t0 && s.dim_rest() > 0) {
      const double num = spectral_norm(Pr * U * Pr);
      const double den = c2 * std::exp(s.rest_abscissa * (t - t0) + corr);
      rep.ratios_rest.push_back(num / den);
      rep.worst_ratio = std::max(rep.worst_ratio, num / den);
    }
  }
  return rep;
}

MetricVariation metric_variation_bound(const std::vector<double>& times, const std::vector<Mat>& forms) {
  if (forms.size() < 2 || forms.size() != times.size())
    throw InvalidInput("metric_variation_bound: need at least two samples with matching times");
  const std::size_t n = forms.size();
  double cl2 = 0.0;
  for (const Mat& L : forms) {
    Eigen::SelfAdjointEigenSolver<Mat> es(L, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0.0)) throw InvalidInput("metric_variation_bound: form sample is not positive definite");
    cl2 = std::max({cl2, hi, 1.0 / lo});
  }
  double variation = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) variation += spectral_norm(forms[j + 1] - forms[j]);

  // best[j]: largest product of norm ratios over node sequences 0 = s_0 <= ... <= s_i = j
  std::vector<double> best(n, 0.0);
  best[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(forms[j], forms[i], Eigen::EigenvaluesOnly);
      const double ratio = std::sqrt(std::max(0.0, ges.eigenvalues().maxCoeff()));
      best[j] = std::max(best[j], best[i] * ratio);
    }
  }
  MetricVariation mv;
  mv.direct = best[n - 1];
  mv.bound = std::exp(0.5 * cl2 * variation);
  if (mv.direct > mv.bound * (1.0 + 1e-6))
    throw NumericalFailure("metric_variation_bound: direct value exceeds the variation bound");
  return mv;
}

}  // namespace lpm
