#include "lpm/models.hpp"

namespace lpm {

ModelSystem saddle_toy(const std::string& name) {
  ModelSystem m;
  m.name = name;
  m.dimension = 2;
  m.equilibrium = Vec::Zero(2);
  m.ladder = NormLadder::uniform(2);
  if (name == "saddle1") {
    // x' = x, y' = -y + x^2; unstable manifold y = x^2/3, stable x = 0
    m.field = [](const Vec& u) -> Vec { return Vec{{u[0], -u[1] + u[0] * u[0]}}; };
    m.jacobian = [](const Vec& u) -> Mat { return Mat{{1.0, 0.0}, {2.0 * u[0], -1.0}}; };
  } else if (name == "saddle2") {
    // x' = 2x + y^2, y' = -y; unstable manifold y = 0, stable x = -y^2/4
    m.field = [](const Vec& u) -> Vec { return Vec{{2.0 * u[0] + u[1] * u[1], -u[1]}}; };
    m.jacobian = [](const Vec& u) -> Mat { return Mat{{2.0, 2.0 * u[1]}, {0.0, -1.0}}; };
  } else {
    throw InvalidInput("saddle_toy: unknown model '" + name + "' (expected saddle1 or saddle2)");
  }
  return m;
}

ModelSystem affine_model(const Mat& A, const Vec& b) {
  if (A.rows() != A.cols() || A.rows() != b.size()) throw InvalidInput("affine_model: dimension mismatch");
  Eigen::FullPivLU<Mat> lu(A);
  if (!lu.isInvertible()) throw InvalidInput("affine_model: singular linear part");
  ModelSystem m;
  m.name = "affine";
  m.dimension = A.rows();
  m.equilibrium = -lu.solve(b);
  m.ladder = NormLadder::uniform(A.rows());
  m.field = [A, b](const Vec& u) -> Vec { return A * u + b; };
  m.jacobian = [A](const Vec&) -> Mat { return A; };
  return m;
}

}  // namespace lpm
