#include "lpm/linear_analysis.hpp"
#include "lpm/models.hpp"
#include "lpm/oracles.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace lpm;

TEST_CASE("backward_shoot on saddle1") {
  const ModelSystem m = saddle_toy("saddle1");
  const auto s = eigen_split(m.jacobian(m.equilibrium), 0.1);
  const auto r = backward_shoot(m, s, Vec::Constant(1, 0.1), 15.0);
  REQUIRE(r.matched_value.size() == 1);
  CHECK(std::abs(r.matched_value[0] - 1.0 / 300.0) < 1e-6);
  const auto z = backward_shoot(m, s, Vec::Zero(1), 15.0);
  CHECK(z.matched_value.norm() == 0.0);
}

TEST_CASE("finite_difference_jacobian") {
  const Mat A{{1.0, 2.0, 0.0}, {-3.0, 0.5, 1.0}, {0.0, 0.0, 4.0}};
  const VectorField lin = [A](const Vec& u) { return Vec(A * u); };
  CHECK((finite_difference_jacobian(lin, Vec{{0.3, -1.0, 2.0}}, 1e-3) - A).cwiseAbs().maxCoeff() < 1e-10);
  const VectorField q = [](const Vec& u) { return Vec{{u[0] * u[0], u[0] * u[1]}}; };
  CHECK((finite_difference_jacobian(q, Vec{{1.0, 2.0}}, 1e-5) - Mat{{2.0, 0.0}, {2.0, 1.0}}).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("quartic_roots") {
  auto sorted_abs_imag = [](const std::array<std::complex<double>, 4>& r) {
    std::array<double, 4> v{};
    for (int i = 0; i < 4; ++i) v[i] = std::abs(r[i].imag());
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto r0 = quartic_roots(3.0, 5.0, 0.0);
  for (const auto& z : r0) CHECK(z.real() == 0.0);
  const auto im0 = sorted_abs_imag(r0);
  CHECK(im0[0] == doctest::Approx(3.0));
  CHECK(im0[3] == doctest::Approx(5.0));

  const auto r1 = quartic_roots(0.0, 0.0, 2.0);
  CHECK(r1[0].real() == doctest::Approx(-2.0));
  CHECK(r1[1].real() == doctest::Approx(-2.0));
  CHECK(r1[2].real() == doctest::Approx(2.0));
  CHECK(r1[3].real() == doctest::Approx(2.0));

  const auto r2 = quartic_roots(-11.0, 61.0, 12.0);
  MmtParams p;
  p.xi0 = 2;
  Eigen::EigenSolver<Mat> es(mmt_block(p, 1).block, false);
  std::vector<double> dense;
  for (Index i = 0; i < 4; ++i) dense.push_back(std::abs(es.eigenvalues()[i].imag()));
  std::sort(dense.begin(), dense.end());
  const auto im2 = sorted_abs_imag(r2);
  for (int i = 0; i < 4; ++i) {
    CHECK(r2[i].real() == 0.0);
    CHECK(im2[i] == doctest::Approx(dense[i]).epsilon(1e-10));
  }

  const auto rf = quartic_roots(-11.0f, 61.0f, 12.0f);
  CHECK(std::abs(rf[0].imag()) > 0.0f);
}

TEST_CASE("lyapunov_kronecker matches diagonal integral") {
  const Mat L = lyapunov_kronecker(Mat{{-1.0, 0.0}, {0.0, -2.0}}, 0.0);
  CHECK(L(0, 0) == doctest::Approx(0.5));
  CHECK(L(1, 1) == doctest::Approx(0.25));
}

TEST_CASE("analytic_manifold") {
  CHECK(analytic_manifold("saddle1", "unstable", 0.3) == doctest::Approx(0.03));
  CHECK(analytic_manifold("saddle2", "stable", 0.2) == doctest::Approx(-0.01));
}
