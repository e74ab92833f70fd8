#pragma once

// Lyapunov-Perron fixed-point construction of local unstable manifolds.
//
// Everything works in split coordinates z = V^{-1}(u - u_eq) = (z_+, z_r),
// where the first dim_plus coordinates span X_+ and the rest span the
// complement (stable and center directions). Orbits live on the uniform
// backward grid -T_max, ..., 0.

#include "lpm/graded_space.hpp"
#include "lpm/linear_analysis.hpp"
#include "lpm/model.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace lpm {

struct LpConfig {
  double lambda = std::numeric_limits<double>::quiet_NaN();  // NaN: middle of (lambda_-, lambda_+)
  double T_max = 20.0;
  double dt = 0.01;
  double eps = 0.1;
  int max_iter = 200;
  double tol = 1e-12;
  double r = 1.0;

  void validate() const;
};

struct LpSystem {
  std::string name;
  Index dim = 0;
  Index dim_plus = 0;
  Mat V, Vinv;
  Mat A_plus, A_rest;  // linear blocks at the equilibrium
  // Non-autonomous path: block-diagonal A(z) along the iterate. Empty for the
  // semilinear splitting, where A_plus/A_rest are used throughout.
  MatrixField block_operator;
  VectorField remainder;  // f(z), f(0) = 0, Df(0) = 0
  MatrixField remainder_jacobian;
  VectorField field;  // full field in z coordinates
  MatrixField field_jacobian;
  NormLadder ladder;  // for the lifted deviation V z
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;

  bool autonomous() const { return !block_operator; }
  Index dim_rest() const { return dim - dim_plus; }
  Vec lift(const Vec& z) const { return V * z; }
  OrbitGrid lift(const OrbitGrid& z) const;
};

// Semilinear split: A_+- = blocks of V^{-1} A(0) V, f = F - blockdiag(A) z.
LpSystem split_field(const ModelSystem& model, const SpectralSplitting& s);

struct LpDiagnostics {
  int iterations = 0;
  double contraction_factor = 0.0;
  double fp_residual = 0.0;
  double trajectory_residual = 0.0;
  double tail_bound = 0.0;
  std::vector<double> increments;
};

struct LpResult {
  OrbitGrid orbit;  // split coordinates
  Vec h;            // rest part of z(0)
  Vec z0;           // full z(0)
  LpDiagnostics diag;
};

class LpSolver {
 public:
  LpSolver(LpSystem sys, LpConfig cfg);

  const LpSystem& system() const { return sys_; }
  const LpConfig& config() const { return cfg_; }
  double lambda() const { return lambda_; }
  Index nodes() const { return n_ + 1; }

  OrbitGrid zero_orbit() const;
  OrbitGrid apply(const Vec& z0_plus, const OrbitGrid& orbit) const;
  LpResult solve(const Vec& z0_plus) const;
  // weighted (level r-1, rate lambda) norm of a split-coordinate orbit
  double weighted_norm(const OrbitGrid& z) const;

  // Linear LP system for U = D_{z0+} z along a fixed point; returns U at
  // every node (dim x dim_plus). Semilinear systems only.
  std::vector<Mat> variational(const LpResult& base) const;

 private:
  // one backward/forward quadrature sweep for matrix-valued data
  std::vector<Mat> sweep(const Mat& plus0, const std::vector<Mat>& f, const std::vector<Mat>* ops) const;
  double tail_bound(const Vec& f_rest_start) const;

  LpSystem sys_;
  LpConfig cfg_;
  double lambda_ = 0.0;
  Index n_ = 0;
  double h_ = 0.0;
  Mat Er_, W0r_, W1r_;  // rest: e^{h A_r}, h(phi1 - phi2), h phi2
  Mat Ep_, W0p_, W1p_;  // plus, backward: e^{-h A_p}, ...
  double tail_C_ = 1.0;
};

OrbitGrid lp_apply(const LpSystem& sys, const Vec& z0_plus, const OrbitGrid& orbit, const LpConfig& cfg);
LpResult lp_solve(const LpSystem& sys, const Vec& z0_plus, const LpConfig& cfg);

struct DecayFit {
  double lambda_fit = 0.0;
  double r2 = 0.0;
};

// Least-squares slope of log|v(t)|_r over nodes with |v| > 1e-12.
DecayFit decay_rate_fit(const OrbitGrid& orbit, const NormLadder& ladder, double r);

struct GraphSample {
  Vec base;
  Vec value;
  std::string status = "ok";
  double lambda_fit = std::numeric_limits<double>::quiet_NaN();
  double fit_r2 = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double contraction = 0.0;
  double fp_residual = 0.0;
  double trajectory_residual = 0.0;
  double tail_bound = 0.0;
  double budget = 0.0;  // Richardson estimate of the quadrature error in h
  double invariance_residual = std::numeric_limits<double>::quiet_NaN();
  double invariance_budget = std::numeric_limits<double>::quiet_NaN();
};

struct ManifoldGraph {
  std::vector<GraphSample> samples;
  double lipschitz = 0.0;
  double tangency_slope = 0.0;  // intercept of |h|/|v| against |v|
  double quadratic_coeff = 0.0;
  Index failures = 0;
};

struct GraphSpec {
  Index points_per_axis = 21;
  double eps = 0.1;
  bool richardson = true;
  unsigned jobs = 1;
};

// Base points: uniform tensor grid for dim_plus <= 3, Halton points above;
// all inside the eps-ball of X_+ coordinates.
std::vector<Vec> graph_base_points(Index dim_plus, Index points_per_axis, double eps);

ManifoldGraph build_manifold_graph(const LpSolver& solver, const GraphSpec& spec);

struct InvarianceReport {
  double max_residual = 0.0;
  double max_ratio = 0.0;  // residual / budget
  Index skipped = 0;
};

// Flows each sample by dt_flow with the full field and compares with the
// graph value re-solved at the new base point; fills the per-sample fields.
InvarianceReport invariance_residual(ManifoldGraph& graph, const LpSolver& solver, double dt_flow);

// Dq_+ at the fixed point: rest rows of U(0).
Mat lp_variational(const LpSolver& solver, const LpResult& base);

struct ContractionBudget {
  double C0 = 1.0, Cf = 0.0;
  int k = 1;
  double lambda_minus = 0.0, lambda_plus = 0.0, lambda = 0.0;
  double L1 = 0.0;
  double M0 = 0.0, M1 = 0.0, l = 0.0;
  std::optional<double> feasible_eps;
};

ContractionBudget contraction_budget(double C0, double Cf, int k, double lambda_minus, double lambda_plus,
                                     double lambda);

struct SampledConstants {
  double C0 = 1.0;
  double Cf = 0.0;
};

// C0 from projector norms and sampled semigroup growth, Cf as the sampled
// Lipschitz constant of f over the eps-ball.
SampledConstants sample_constants(const LpSolver& solver, double eps, unsigned seed = 7, int draws = 200);

struct QuasilinearSystem {
  LpSystem system;  // z = V^{-1} v with v = B(u)
  VectorField B;
  MatrixField DB;
  VectorField invert_B;
  double condition_number = 0.0;  // of DB(0)
};

// v = B(u) = sum_+- s Pi_+-(F(u) - (omega_+- -+ 1) u), s = sigma_scale^{2-j}.
QuasilinearSystem quasilinearize(const ModelSystem& model, const SpectralSplitting& s, double sigma_scale = 1.0,
                                 int j = 2);

}  // namespace lpm
