#include "lpm/linear_analysis.hpp"
#include "lpm/models.hpp"
#include "lpm/oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace lpm;

namespace {

MmtParams unit_params(int xi0, double a) {
  MmtParams p;
  p.alpha = p.beta = p.sigma = 1.0;
  p.a = a;
  p.xi0 = xi0;
  return p;
}

}  // namespace

TEST_CASE("mmt plane-wave frequency") {
  CHECK(mmt_plane_wave_frequency(unit_params(1, 1.0)) == -2.0);
  CHECK(mmt_plane_wave_frequency(unit_params(2, 1.0)) == -20.0);
  CHECK(mmt_plane_wave_frequency(unit_params(3, 0.0)) == -9.0);
}

TEST_CASE("mmt_block coefficients and spectrum") {
  const auto b = mmt_block(unit_params(2, 1.0), 1);
  CHECK(b.c == doctest::Approx(12.0));
  CHECK(b.c_plus == doctest::Approx(-11.0));
  CHECK(b.c_minus == doctest::Approx(61.0));
  CHECK(b.c_plus * b.c_plus + b.c_minus * b.c_minus - 2.0 * b.c * b.c == doctest::Approx(3554.0));
  Eigen::EigenSolver<Mat> es(b.block, false);
  CHECK(es.eigenvalues().real().cwiseAbs().maxCoeff() < 1e-10);

  const auto lin = mmt_block(unit_params(2, 0.0), 3);
  CHECK(lin.c == 0.0);
  Eigen::EigenSolver<Mat> el(lin.block, false);
  std::vector<double> im;
  for (Index i = 0; i < 4; ++i) {
    CHECK(std::abs(el.eigenvalues()[i].real()) < 1e-12);
    im.push_back(std::abs(el.eigenvalues()[i].imag()));
  }
  std::sort(im.begin(), im.end());
  const double lo = std::min(std::abs(lin.c_plus), std::abs(lin.c_minus));
  const double hi = std::max(std::abs(lin.c_plus), std::abs(lin.c_minus));
  CHECK(im[0] == doctest::Approx(lo));
  CHECK(im[3] == doctest::Approx(hi));

  CHECK_THROWS_WITH_AS(mmt_block(unit_params(2, 1.0), 2), doctest::Contains("degenerate pair"), InvalidInput);
}

TEST_CASE("mmt_unstable_scan") {
  for (const auto& row : mmt_unstable_scan(unit_params(2, 0.0), -6, 10)) CHECK_FALSE(row.flagged);

  MmtParams p;
  p.alpha = p.beta = 0.5;
  p.sigma = -1.0;
  p.xi0 = 2;
  p.a = 0.5;
  int flagged = 0;
  for (const auto& row : mmt_unstable_scan(p, -4, 8)) {
    if (row.flagged) {
      ++flagged;
      CHECK(row.max_real_part > 1e-8);
    } else {
      CHECK(row.max_real_part < 1e-8);
    }
  }
  CHECK(flagged > 0);
}

TEST_CASE("mmt_galerkin: equilibrium, block structure and energy") {
  MmtParams p = unit_params(2, 1.0);
  p.radius = 2;
  const ModelSystem m = mmt_galerkin(p);
  CHECK(m.field(m.equilibrium).cwiseAbs().maxCoeff() < 1e-12);

  const Mat J = m.jacobian(m.equilibrium);
  const Mat Jfd = finite_difference_jacobian(m.field, m.equilibrium, 1e-5);
  CHECK((J - Jfd).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, J.cwiseAbs().maxCoeff()));

  // modes 0..4: xi = 1 -> slot 1, partner 3 -> slot 3
  const auto b = mmt_block(p, 1);
  const std::array<Index, 4> idx{2, 3, 6, 7};
  Mat sub(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) sub(i, j) = J(idx[i], idx[j]);
  CHECK((sub - b.block).cwiseAbs().maxCoeff() < 1e-10);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  Vec u = m.equilibrium;
  for (Index i = 0; i < u.size(); ++i) u[i] += 0.01 * nd(rng);
  const double h0 = m.energy(u);
  // fourth-order drift: halving dt shrinks it about sixteenfold
  const double drift1 = std::abs(m.energy(rk4_flow(m.field, u, 1.0, 2e-3)) - h0);
  const double drift2 = std::abs(m.energy(rk4_flow(m.field, u, 1.0, 1e-3)) - h0);
  CHECK(drift1 < 1e-3 * std::abs(h0));
  CHECK(drift1 / drift2 > 12.0);
}

TEST_CASE("mmt_galerkin rejects bad parameters") {
  MmtParams p = unit_params(2, 1.0);
  p.radius = 40;
  CHECK_THROWS_WITH_AS(mmt_galerkin(p), doctest::Contains("too large"), InvalidInput);
  p.radius = 2;
  p.sigma = 0.5;
  CHECK_THROWS_AS(mmt_galerkin(p), InvalidInput);
}

TEST_CASE("saddle toys") {
  const ModelSystem s1 = saddle_toy("saddle1");
  const ModelSystem s2 = saddle_toy("saddle2");
  CHECK((s1.jacobian(s1.equilibrium) - Mat{{1.0, 0.0}, {0.0, -1.0}}).norm() == 0.0);
  CHECK((s2.jacobian(s2.equilibrium) - Mat{{2.0, 0.0}, {0.0, -1.0}}).norm() == 0.0);
  for (double x : {-0.3, 0.1, 0.7}) {
    const Vec f = s1.field(Vec{{x, x * x / 3.0}});
    CHECK(std::abs(f[1] - (2.0 * x / 3.0) * f[0]) < 1e-15);
    const Vec g = s2.field(Vec{{-x * x / 4.0, x}});
    CHECK(std::abs(g[0] - (-x / 2.0) * g[1]) < 1e-15);
  }
  CHECK_THROWS_AS(saddle_toy("saddle3"), InvalidInput);
}

TEST_CASE("reaction_diffusion splitting") {
  const ModelSystem rd1 = reaction_diffusion(0.5, 5);
  const auto s1 = eigen_split(rd1.jacobian(rd1.equilibrium), 0.1);
  CHECK(s1.dim_plus == 1);
  CHECK(s1.eigenvalues.imag().cwiseAbs().maxCoeff() == 0.0);
  const ModelSystem rd2 = reaction_diffusion(2.0, 5);
  CHECK(eigen_split(rd2.jacobian(rd2.equilibrium), 0.1).dim_plus == 2);
  const Vec u = Vec::LinSpaced(5, 0.1, -0.2);
  CHECK((rd2.jacobian(u) - finite_difference_jacobian(rd2.field, u, 1e-5)).norm() < 1e-8);
}

TEST_CASE("kdv_wave_profile") {
  const Vec x = Vec::LinSpaced(401, -20.0, 20.0);
  const auto p0 = kdv_wave_profile(1.0, 2.0, 0.0, x);
  CHECK(p0.phi_max == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(kdv_wave_profile(4.0, 3.0, 0.0, x).phi_max == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-10));
  const auto p1 = kdv_wave_profile(1.0, 2.0, 1.0, x);
  CHECK(p1.phi_max == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(p1.max_level_residual < 1e-8);
  CHECK((p1.phi - p0.phi).cwiseAbs().maxCoeff() > 1e-3);
  CHECK_THROWS_AS(kdv_wave_profile(0.0, 2.0, 0.0, x), InvalidInput);
}
