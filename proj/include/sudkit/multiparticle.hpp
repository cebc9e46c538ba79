#pragma once

#include <unsupported/Eigen/KroneckerProduct>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sudkit/matrix.hpp"
#include "sudkit/su_basis.hpp"

namespace sudkit {

/// Everything is dense; this cap keeps d^n honest for desk-scale work.
inline constexpr std::int64_t kDenseDimensionCap = 4096;

/// d^n_particles, rejected before any allocation if it exceeds the cap.
inline std::int64_t dense_dimension(int d, int n_particles) {
  if (d < 2) throw std::invalid_argument("dense_dimension: d must be >= 2");
  if (n_particles < 1) throw std::invalid_argument("dense_dimension: n_particles must be >= 1");
  std::int64_t dim = 1;
  for (int i = 0; i < n_particles; ++i) {
    dim *= d;
    if (dim > kDenseDimensionCap)
      throw std::invalid_argument("dense_dimension: d^n_particles exceeds the dense cap of 4096");
  }
  return dim;
}

/// Operator acting on the full n-particle space (C^d)^{x n}.  Particle 0 is
/// the leftmost Kronecker factor.
struct ManyBodyOperator {
  int d = 0;
  int n_particles = 0;
  Matrix matrix;
  std::string label;
};

/// Places a single-particle operator on one tensor factor, identity elsewhere.
inline ManyBodyOperator embed(const Matrix& op, int particle, int n_particles,
                              std::string label = "") {
  if (op.rows() != op.cols() || op.rows() < 2)
    throw std::invalid_argument("embed: operator must be square with d >= 2");
  const int d = static_cast<int>(op.rows());
  const std::int64_t dim = dense_dimension(d, n_particles);
  if (particle < 0 || particle >= n_particles)
    throw std::invalid_argument("embed: particle index out of range");

  std::int64_t left = 1, right = 1;
  for (int i = 0; i < particle; ++i) left *= d;
  for (int i = particle + 1; i < n_particles; ++i) right *= d;

  Matrix result = Eigen::kroneckerProduct(
      Eigen::kroneckerProduct(Matrix::Identity(left, left), op).eval(),
      Matrix::Identity(right, right));
  (void)dim;
  return {d, n_particles, std::move(result), std::move(label)};
}

/// Collective operators S_j = sum over particles of g_j on each factor.
struct CollectiveErrorSet {
  int d = 0;
  int n_particles = 0;
  std::vector<ManyBodyOperator> operators;

  int size() const { return d * d - 1; }
};

inline CollectiveErrorSet collective_set(const GeneratorBasis& basis, int n_particles) {
  const std::int64_t dim = dense_dimension(basis.d, n_particles);
  CollectiveErrorSet set;
  set.d = basis.d;
  set.n_particles = n_particles;
  set.operators.reserve(basis.generators.size());
  for (std::size_t j = 0; j < basis.generators.size(); ++j) {
    Matrix s = Matrix::Zero(dim, dim);
    for (int alpha = 0; alpha < n_particles; ++alpha)
      s += embed(basis.generators[j], alpha, n_particles).matrix;
    set.operators.push_back(
        {basis.d, n_particles, std::move(s), "S_" + std::to_string(j)});
  }
  return set;
}

inline ManyBodyOperator commutator(const ManyBodyOperator& a, const ManyBodyOperator& b) {
  if (a.d != b.d || a.n_particles != b.n_particles || a.matrix.rows() != b.matrix.rows())
    throw std::invalid_argument("commutator: operators act on different spaces");
  return {a.d, a.n_particles, a.matrix * b.matrix - b.matrix * a.matrix,
          "[" + a.label + "," + b.label + "]"};
}

struct CommutationReport {
  bool commutes = false;
  double max_residual = 0.0;
};

/// Max-norm of [h, S_j] over the whole collective set.
inline CommutationReport commutes_with_all(const ManyBodyOperator& h,
                                           const CollectiveErrorSet& set, double tol = 1e-10) {
  if (h.d != set.d || h.n_particles != set.n_particles)
    throw std::invalid_argument("commutes_with_all: operator and set act on different spaces");
  double residual = 0.0;
  for (const ManyBodyOperator& s : set.operators)
    residual = std::max(residual, max_abs(h.matrix * s.matrix - s.matrix * h.matrix));
  return {residual <= tol, residual};
}

/// exp(sum_j v_j S_j) for a coefficient vector of length d^2 - 1.
inline ManyBodyOperator collective_unitary(const CollectiveErrorSet& set,
                                           const std::vector<Complex>& v) {
  if (static_cast<int>(v.size()) != set.size())
    throw std::invalid_argument("collective_unitary: coefficient count must equal d^2 - 1");
  const Eigen::Index dim = set.operators.empty() ? 0 : set.operators.front().matrix.rows();
  Matrix arg = Matrix::Zero(dim, dim);
  for (std::size_t j = 0; j < v.size(); ++j) arg += v[j] * set.operators[j].matrix;
  return {set.d, set.n_particles, matrix_exponential(arg), "exp(v.S)"};
}

}  // namespace sudkit
