#pragma once

// Spectral splitting of A = DF(u_eq), Lyapunov quadratic forms, and the
// non-autonomous evolution operators U(t, t0) of v' = A(t) v.

#include "lpm/graded_space.hpp"
#include "lpm/model.hpp"

#include <utility>
#include <vector>

namespace lpm {

struct SpectralSplitting {
  CVec eigenvalues;
  std::vector<int> block;  // +1 (X_+), 0 (center), -1 (stable), per eigenvalue
  ProjectionPair projection;
  Index dim_plus = 0;
  Index dim_center = 0;
  Index dim_minus = 0;
  double omega_plus = 0.0;
  double omega_minus = 0.0;
  double lambda_plus = 0.0;    // min Re over X_+
  double rest_abscissa = 0.0;  // max Re over the complement
  double gap = 0.0;

  // Columns [basis_plus | basis_rest]; split coordinates are z = Vinv u.
  Mat V;
  Mat Vinv;

  Index dimension() const { return V.rows(); }
  Index dim_rest() const { return dimension() - dim_plus; }
};

SpectralSplitting eigen_split(const Mat& A, double gap);

struct SymmetryReport {
  double worst_distance = 0.0;
  bool symmetric = true;
};

// Pairs every eigenvalue lambda with -conj(lambda).
SymmetryReport hamiltonian_symmetry_check(const Mat& A, double tol);

struct LyapunovForm {
  Mat L;
  double omega = 0.0;
};

double spectral_abscissa(const Mat& A);

// Solves A^T L + L A - 2 omega L = -I.
LyapunovForm lyapunov_form(const Mat& A, double omega);

double lyapunov_residual(const Mat& A, const LyapunovForm& form);

// max generalized eigenvalue of sym(L A) w.r.t. L, minus omega.
double dissipativity_check(const LyapunovForm& form, const Mat& A, double omega);

class Timeline {
 public:
  using OperatorFn = std::function<Mat(double)>;

  static Timeline autonomous(Mat A, double t_lo = -1e300, double t_hi = 1e300);
  static Timeline from_function(OperatorFn A, double t_lo, double t_hi);
  // A(t) = DF(u_eq + w(t)), w linearly interpolated from the orbit's nodes.
  static Timeline along_orbit(const ModelSystem& model, const OrbitGrid& orbit);

  Mat operator_at(double t) const;
  double t_min() const { return t_lo_; }
  double t_max() const { return t_hi_; }
  bool contains(double t) const;
  bool is_autonomous() const { return constant_; }
  Index dimension() const { return dim_; }
  // integral of |w'| between two times (0 for autonomous timelines)
  double variation(double t0, double t1) const;

 private:
  OperatorFn fn_;
  Mat A0_;
  bool constant_ = false;
  double t_lo_ = 0.0, t_hi_ = 0.0;
  Index dim_ = 0;
  OrbitGrid orbit_;
  bool has_orbit_ = false;
};

// Classical RK4 for v' = A(t) v from t0 to t1 (either direction); substep
// h <= dt with |A| h <= 0.1.
Vec evolve(const Timeline& tl, const Vec& v0, double t0, double t1, double dt);
Mat evolve_matrix(const Timeline& tl, const Mat& M0, double t0, double t1, double dt);

struct GrowthReport {
  double worst_ratio = 0.0;
  std::vector<double> ratios_plus;
  std::vector<double> ratios_rest;
};

// ratio = |Pi U(t, t0) Pi| / (C0^2 exp(rate (t - t0) + C0^2 |int_{t0}^{t} |w'||));
// the X_+ block is sampled backward (t <= t0), the rest forward.
GrowthReport growth_bound_check(const Timeline& tl, const SpectralSplitting& s,
                                const std::vector<std::pair<double, double>>& samples, double C0,
                                double dt = 1e-3);

struct MetricVariation {
  double direct = 0.0;
  double bound = 0.0;
};

MetricVariation metric_variation_bound(const std::vector<double>& times, const std::vector<Mat>& forms);

struct PicardResult {
  OrbitGrid orbit;  // absolute states on [0, T]
  std::vector<double> increments;
  double contraction = 0.0;
  int iterations = 0;
};

PicardResult picard_solve(const ModelSystem& model, const Vec& u0, double T, double dt, int max_iter = 50,
                          double tol = 1e-10);

// Node-sampled solution of u' = F(u) with derivatives stored (T may be < 0).
OrbitGrid trajectory(const ModelSystem& model, const Vec& u0, double T, double dt);

struct VariationalFlow {
  Vec times;
  std::vector<Mat> U;
};

VariationalFlow variational_flow(const ModelSystem& model, const OrbitGrid& orbit, double dt, double tol = 1e-6);

}  // namespace lpm
