#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sudkit/matrix.hpp"

namespace sudkit {

/// Hermitian, traceless generator set for su(d), normalized so that
/// Tr(g_i g_j) = 2 delta_ij.
struct GeneratorBasis {
  int d = 0;
  std::vector<Matrix> generators;
  std::string ordering = "symmetric-antisymmetric-diagonal";

  int size() const { return d * d - 1; }
};

/// Builds the generalized Gell-Mann basis for su(d).
///
/// Ordering: for every pair p < q (lexicographic) the symmetric matrix
/// E_pq + E_qp, then for every pair p < q the antisymmetric matrix
/// -i (E_pq - E_qp), then the d-1 diagonal matrices
/// sqrt(2/(m(m+1))) * diag(1, ..., 1, -m, 0, ..., 0) with m leading ones,
/// for m = 1, ..., d-1.  For d = 2 this is exactly (sigma_x, sigma_y, sigma_z).
inline GeneratorBasis build_basis(int d) {
  if (d < 2) throw std::invalid_argument("build_basis: d must be >= 2");

  GeneratorBasis basis;
  basis.d = d;
  basis.generators.reserve(static_cast<std::size_t>(d) * d - 1);

  for (int p = 0; p < d; ++p) {
    for (int q = p + 1; q < d; ++q) {
      Matrix g = Matrix::Zero(d, d);
      g(p, q) = 1.0;
      g(q, p) = 1.0;
      basis.generators.push_back(std::move(g));
    }
  }
  for (int p = 0; p < d; ++p) {
    for (int q = p + 1; q < d; ++q) {
      Matrix g = Matrix::Zero(d, d);
      g(p, q) = Complex(0, -1);
      g(q, p) = Complex(0, 1);
      basis.generators.push_back(std::move(g));
    }
  }
  for (int m = 1; m < d; ++m) {
    Matrix g = Matrix::Zero(d, d);
    const double norm = std::sqrt(2.0 / (static_cast<double>(m) * (m + 1)));
    for (int r = 0; r < m; ++r) g(r, r) = norm;
    g(m, m) = -norm * m;
    basis.generators.push_back(std::move(g));
  }
  return basis;
}

/// Index of the symmetric generator coupling levels p < q.
inline int symmetric_index(int d, int p, int q) {
  if (p < 0 || q <= p || q >= d) throw std::invalid_argument("symmetric_index: need 0 <= p < q < d");
  return p * d - p * (p + 1) / 2 + (q - p - 1);
}

/// Index of the antisymmetric generator coupling levels p < q.
inline int antisymmetric_index(int d, int p, int q) {
  return d * (d - 1) / 2 + symmetric_index(d, p, q);
}

/// Index of the m-th diagonal generator, m = 1, ..., d-1.
inline int diagonal_index(int d, int m) {
  if (m < 1 || m >= d) throw std::invalid_argument("diagonal_index: need 1 <= m < d");
  return d * (d - 1) + (m - 1);
}

}  // namespace sudkit
