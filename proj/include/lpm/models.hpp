#pragma once

#include "lpm/model.hpp"

#include <string>
#include <vector>

namespace lpm {

ModelSystem saddle_toy(const std::string& name);

// u' = A u + b around the equilibrium -A^{-1} b.
ModelSystem affine_model(const Mat& A, const Vec& b);

// Cosine-Galerkin truncation of u_t = u_xx + lambda u - u^3 on [0, 2pi].
ModelSystem reaction_diffusion(double lambda_param, Index n_modes);

struct MmtParams {
  double alpha = 1.0;
  double beta = 1.0;
  double sigma = 1.0;
  double a = 1.0;
  int xi0 = 1;
  std::vector<int> mode_set;  // empty: xi0-K .. xi0+K with K = radius
  int radius = 2;

  std::vector<int> modes() const;
  void validate() const;
};

double mmt_plane_wave_frequency(const MmtParams& p);

struct ModePairBlock {
  double c_plus = 0.0;
  double c_minus = 0.0;
  double c = 0.0;
  Mat block;  // order (Re b+, Im b+, Re b-, Im b-)
};

ModePairBlock mmt_block(const MmtParams& p, int xi);

struct ScanRow {
  int xi = 0;
  double discriminant = 0.0;
  bool flagged = false;
  double max_real_part = 0.0;  // dense eigensolve of the block
};

std::vector<ScanRow> mmt_unstable_scan(const MmtParams& p, int xi_min, int xi_max);

// Rotating-frame Galerkin system; coordinates interleaved (Re v_k, Im v_k)
// in the order of p.modes().
ModelSystem mmt_galerkin(const MmtParams& p);

struct KdvProfile {
  Vec x;
  Vec phi;
  Vec phi_x;
  double phi_max = 0.0;
  double max_level_residual = 0.0;
};

// H(phi, phi_x) = 1/2 (1 + a phi^2) phi_x^2 - c/2 phi^2 + phi^{p+1}/(p+1).
double kdv_energy(double phi, double phi_x, double c, double p, double a);

KdvProfile kdv_wave_profile(double c, double p, double a, const Vec& x_grid);

}  // namespace lpm
