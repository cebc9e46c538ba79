#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace sudkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Entrywise max-norm, the residual measure used throughout.
inline double max_abs(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
  return max_abs(m - m.adjoint()) <= tol;
}

inline bool is_anti_hermitian(const Matrix& m, double tol = 1e-12) {
  return max_abs(m + m.adjoint()) <= tol;
}

/// exp(M).  Hermitian and anti-Hermitian arguments go through an
/// eigendecomposition; anything else falls back to scaling-and-squaring.
inline Matrix matrix_exponential(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_exponential: matrix must be square");
  const double scale = std::max(1.0, max_abs(m));
  if (is_hermitian(m, 1e-12 * scale)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
           es.eigenvectors().adjoint();
  }
  if (is_anti_hermitian(m, 1e-12 * scale)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es((Complex(0, -1) * m).eval());
    Vector phases = (Complex(0, 1) * es.eigenvalues()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  }
  return m.exp();
}

/// Deterministic sign convention for basis columns: the first component with
/// magnitude above the threshold is rotated to the positive real axis.
inline void fix_column_phases(Matrix& columns, double threshold = 1e-12) {
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    for (Eigen::Index r = 0; r < columns.rows(); ++r) {
      const Complex x = columns(r, c);
      if (std::abs(x) > threshold) {
        columns.col(c) *= std::conj(x) / std::abs(x);
        break;
      }
    }
  }
}

}  // namespace sudkit
