#pragma once

#include <Eigen/Dense>

namespace optomech {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Largest absolute entry; 0 for an empty matrix.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Symplectic form Ω = ⊕ [[0, 1], [-1, 0]] over `modes` modes.
Eigen::MatrixXd symplectic_form(int modes);

/// Symplectic eigenvalues of a 2n×2n covariance matrix, ascending.
///
/// Computed as the moduli of the eigenvalues of iΩV; these come in ± pairs so
/// every second modulus is kept.
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& v);

}  // namespace optomech
