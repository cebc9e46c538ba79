#pragma once

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sudkit/matrix.hpp"

namespace sudkit {

/// Eigenvalues of a Hermitian matrix, ascending.
inline RealVector hermitian_spectrum(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  return es.eigenvalues();
}

inline Vector vectorize(const Matrix& m) {
  return Eigen::Map<const Vector>(m.data(), m.size());
}

struct SpanFit {
  std::vector<Complex> coefficients;
  double residual = 0.0;
};

/// Least-squares projection of a target operator onto the span of the given
/// operators, via pseudo-inverse with a relative singular-value cutoff.
/// The residual is the max-norm of target minus its projection.
inline SpanFit fit_onto_span(const Matrix& target, const std::vector<Matrix>& span,
                             double sv_cutoff = 1e-10) {
  if (span.empty()) return {{}, max_abs(target)};
  const Eigen::Index dim2 = target.size();
  Matrix design(dim2, static_cast<Eigen::Index>(span.size()));
  for (std::size_t c = 0; c < span.size(); ++c) {
    if (span[c].rows() != target.rows() || span[c].cols() != target.cols())
      throw std::invalid_argument("fit_onto_span: span member has wrong shape");
    design.col(static_cast<Eigen::Index>(c)) = vectorize(span[c]);
  }
  Eigen::JacobiSVD<Matrix> svd(design, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(sv_cutoff);
  const Vector x = svd.solve(vectorize(target));

  Matrix projection = Matrix::Zero(target.rows(), target.cols());
  for (std::size_t c = 0; c < span.size(); ++c)
    projection += x(static_cast<Eigen::Index>(c)) * span[c];

  SpanFit fit;
  fit.coefficients.assign(x.data(), x.data() + x.size());
  fit.residual = max_abs(target - projection);
  return fit;
}

/// Dimension of the commutant {X : [X, A] = 0 for every A in ops}, computed
/// as the null-space dimension of the positive semidefinite map
/// X -> sum_A [A, [A, X]] on vectorized matrices.  The operators must be
/// Hermitian.
inline int commutant_dimension(const std::vector<Matrix>& ops, double rel_tol = 1e-8) {
  if (ops.empty()) throw std::invalid_argument("commutant_dimension: empty operator list");
  const Eigen::Index dim = ops.front().rows();
  const Eigen::Index dim2 = dim * dim;
  const Matrix id = Matrix::Identity(dim, dim);
  Matrix delta = Matrix::Zero(dim2, dim2);
  for (const Matrix& a : ops) {
    if (a.rows() != dim || a.cols() != dim)
      throw std::invalid_argument("commutant_dimension: operators have mixed shapes");
    const Matrix a2 = a * a;
    delta += Eigen::kroneckerProduct(id, a2).eval();
    delta += Eigen::kroneckerProduct(a2.transpose(), id).eval();
    delta -= 2.0 * Eigen::kroneckerProduct(a.transpose(), a).eval();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(delta);
  const RealVector w = es.eigenvalues();
  const double threshold = rel_tol * std::max(1.0, w(w.size() - 1));
  int nullity = 0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    if (w(i) <= threshold) ++nullity;
  return nullity;
}

/// Dimension of the linear span of a set of operators.
inline int span_dimension(const std::vector<Matrix>& ops, double rel_tol = 1e-8) {
  if (ops.empty()) return 0;
  Matrix stacked(ops.front().size(), static_cast<Eigen::Index>(ops.size()));
  for (std::size_t c = 0; c < ops.size(); ++c)
    stacked.col(static_cast<Eigen::Index>(c)) = vectorize(ops[c]);
  Eigen::JacobiSVD<Matrix> svd(stacked);
  const RealVector sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rank;
  return rank;
}

}  // namespace sudkit
