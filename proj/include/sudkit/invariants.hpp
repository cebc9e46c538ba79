#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sudkit/linalg.hpp"
#include "sudkit/matrix.hpp"
#include "sudkit/multiparticle.hpp"
#include "sudkit/structure_tensors.hpp"
#include "sudkit/su_basis.hpp"

namespace sudkit {

enum class InvariantKind { c2, c3, cn, j2, i2, i3, i4 };

inline const char* invariant_label(InvariantKind kind) {
  switch (kind) {
    case InvariantKind::c2: return "C2";
    case InvariantKind::c3: return "C3";
    case InvariantKind::cn: return "Cn";
    case InvariantKind::j2: return "J2";
    case InvariantKind::i2: return "I2";
    case InvariantKind::i3: return "I3";
    case InvariantKind::i4: return "I4";
  }
  return "unknown";
}

/// An operator built to commute with every collective generator.  All
/// coefficients carry the unit-contraction normalization: the defining sums
/// enter with coefficient exactly 1.
struct InvariantOperator {
  InvariantKind kind = InvariantKind::c2;
  std::vector<int> particles;
  int order = 2;
  ManyBodyOperator op;
};

/// Quadratic Casimir on one particle: sum_i g_i g_i = (2(d^2-1)/d) I.
inline Matrix casimir_c2(const GeneratorBasis& basis) {
  Matrix c = Matrix::Zero(basis.d, basis.d);
  for (const Matrix& g : basis.generators) c += g * g;
  return c;
}

/// Cubic Casimir on one particle: sum_ijk d_ijk g_i g_j g_k.
inline Matrix casimir_c3(const GeneratorBasis& basis, const StructureTensors& tensors) {
  if (tensors.d != basis.d)
    throw std::invalid_argument("casimir_c3: tensors and basis dimensions differ");
  const int n = basis.size();
  const std::vector<double> D = tensors.d_sym.dense();
  const std::size_t nn = static_cast<std::size_t>(n);
  Matrix c = Matrix::Zero(basis.d, basis.d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Matrix gij = basis.generators[static_cast<std::size_t>(i)] *
                         basis.generators[static_cast<std::size_t>(j)];
      for (int k = 0; k < n; ++k) {
        const double v = D[(static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j)) * nn +
                           static_cast<std::size_t>(k)];
        if (v != 0.0) c += v * (gij * basis.generators[static_cast<std::size_t>(k)]);
      }
    }
  return c;
}

/// Casimir of arbitrary order n >= 2, built from a chain of d-tensors in
/// which consecutive links share one contracted index:
///
///   C_n = d_{i1 i2 i3} d_{i3 i4 i5} ... d_{i_{n-2} i_{n-1} i_n}
///         g_{i1} g_{i2} g_{i4} ... g_{i_{n-1}} g_{i_n}
///
/// n = 2 degenerates to sum_i g_i g_i and n = 3 to the cubic Casimir.
inline Matrix casimir_cn(const GeneratorBasis& basis, const StructureTensors& tensors, int order) {
  if (order < 2) throw std::invalid_argument("casimir_cn: order must be >= 2");
  if (order == 2) return casimir_c2(basis);
  if (order == 3) return casimir_c3(basis, tensors);
  if (tensors.d != basis.d)
    throw std::invalid_argument("casimir_cn: tensors and basis dimensions differ");

  const int n = basis.size();
  const std::vector<double> D = tensors.d_sym.dense();
  const std::size_t nn = static_cast<std::size_t>(n);
  const auto at = [&](int i, int j, int k) {
    return D[(static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j)) * nn +
             static_cast<std::size_t>(k)];
  };

  // Head tensor: partial[c] = sum_ab d_abc g_a g_b.
  std::vector<Matrix> partial(nn, Matrix::Zero(basis.d, basis.d));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Matrix gab;
      bool have = false;
      for (int c = 0; c < n; ++c) {
        const double v = at(a, b, c);
        if (v == 0.0) continue;
        if (!have) {
          gab = basis.generators[static_cast<std::size_t>(a)] *
                basis.generators[static_cast<std::size_t>(b)];
          have = true;
        }
        partial[static_cast<std::size_t>(c)] += v * gab;
      }
    }

  // Middle tensors contribute one generator each.
  const int chain_length = order - 2;
  for (int t = 1; t < chain_length - 1; ++t) {
    std::vector<Matrix> next(nn, Matrix::Zero(basis.d, basis.d));
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a) {
        const Matrix step = partial[static_cast<std::size_t>(c)] *
                            basis.generators[static_cast<std::size_t>(a)];
        for (int c2 = 0; c2 < n; ++c2) {
          const double v = at(c, a, c2);
          if (v != 0.0) next[static_cast<std::size_t>(c2)] += v * step;
        }
      }
    partial = std::move(next);
  }

  // Tail tensor closes the chain with two generators.
  Matrix result = Matrix::Zero(basis.d, basis.d);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a) {
      const Matrix step =
          partial[static_cast<std::size_t>(c)] * basis.generators[static_cast<std::size_t>(a)];
      for (int b = 0; b < n; ++b) {
        const double v = at(c, a, b);
        if (v != 0.0) result += v * (step * basis.generators[static_cast<std::size_t>(b)]);
      }
    }
  return result;
}

/// J2 = sum_j S_j S_j with unit contraction coefficient.  The same operator
/// under the Killing-style contraction f_ijk f_ljk = d delta_il picks up an
/// overall factor of d; only the normalization reported here is emitted.
inline InvariantOperator collective_j2(const CollectiveErrorSet& set) {
  const Eigen::Index dim = set.operators.empty() ? 0 : set.operators.front().matrix.rows();
  Matrix j2 = Matrix::Zero(dim, dim);
  for (const ManyBodyOperator& s : set.operators) j2 += s.matrix * s.matrix;
  return {InvariantKind::j2, {}, 2,
          {set.d, set.n_particles, std::move(j2), "J2"}};
}

namespace detail {

inline void check_particles(const std::vector<int>& particles, int n_particles,
                            const char* where) {
  for (std::size_t a = 0; a < particles.size(); ++a) {
    if (particles[a] < 0 || particles[a] >= n_particles)
      throw std::invalid_argument(std::string(where) + ": particle index out of range");
    for (std::size_t b = a + 1; b < particles.size(); ++b)
      if (particles[a] == particles[b])
        throw std::invalid_argument(std::string(where) + ": particle indices must be distinct");
  }
}

inline std::vector<Matrix> embedded_generators(const GeneratorBasis& basis, int particle,
                                               int n_particles) {
  std::vector<Matrix> out;
  out.reserve(basis.generators.size());
  for (const Matrix& g : basis.generators)
    out.push_back(embed(g, particle, n_particles).matrix);
  return out;
}

}  // namespace detail

/// Pairwise invariant I2(a, b) = sum_i g_i^(a) g_i^(b).
inline InvariantOperator invariant_i2(const GeneratorBasis& basis, int alpha, int beta,
                                      int n_particles) {
  detail::check_particles({alpha, beta}, n_particles, "invariant_i2");
  const std::int64_t dim = dense_dimension(basis.d, n_particles);
  Matrix m = Matrix::Zero(dim, dim);
  for (const Matrix& g : basis.generators)
    m += embed(g, alpha, n_particles).matrix * embed(g, beta, n_particles).matrix;
  return {InvariantKind::i2, {alpha, beta}, 2,
          {basis.d, n_particles, std::move(m),
           "I2(" + std::to_string(alpha) + "," + std::to_string(beta) + ")"}};
}

/// Triple invariant I3(a, b, c) = sum_ijk f_ijk g_i^(a) g_j^(b) g_k^(c).
/// Hermiticity rests on the three particles being distinct, so the
/// anti-Hermitian residue is checked before the operator is returned.
inline InvariantOperator invariant_i3(const GeneratorBasis& basis, const StructureTensors& tensors,
                                      int alpha, int beta, int gamma, int n_particles) {
  if (tensors.d != basis.d)
    throw std::invalid_argument("invariant_i3: tensors and basis dimensions differ");
  detail::check_particles({alpha, beta, gamma}, n_particles, "invariant_i3");
  const std::int64_t dim = dense_dimension(basis.d, n_particles);
  const std::vector<Matrix> ga = detail::embedded_generators(basis, alpha, n_particles);
  const std::vector<Matrix> gb = detail::embedded_generators(basis, beta, n_particles);
  const std::vector<Matrix> gc = detail::embedded_generators(basis, gamma, n_particles);

  Matrix m = Matrix::Zero(dim, dim);
  const int n = basis.size();
  const std::vector<double> F = tensors.f.dense();
  const std::size_t nn = static_cast<std::size_t>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix gij;
      bool have = false;
      for (int k = 0; k < n; ++k) {
        const double v = F[(static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j)) * nn +
                           static_cast<std::size_t>(k)];
        if (v == 0.0) continue;
        if (!have) {
          gij = ga[static_cast<std::size_t>(i)] * gb[static_cast<std::size_t>(j)];
          have = true;
        }
        m += v * (gij * gc[static_cast<std::size_t>(k)]);
      }
    }

  if (!is_hermitian(m, 1e-12 * std::max(1.0, max_abs(m))))
    throw std::runtime_error("invariant_i3: anti-Hermitian residue above 1e-12");
  return {InvariantKind::i3, {alpha, beta, gamma}, 3,
          {basis.d, n_particles, std::move(m),
           "I3(" + std::to_string(alpha) + "," + std::to_string(beta) + "," +
               std::to_string(gamma) + ")"}};
}

/// Symmetric triple invariant I4(a, b, c) = sum_ijk d_ijk g_i^(a) g_j^(b) g_k^(c).
inline InvariantOperator invariant_i4(const GeneratorBasis& basis, const StructureTensors& tensors,
                                      int alpha, int beta, int gamma, int n_particles) {
  if (tensors.d != basis.d)
    throw std::invalid_argument("invariant_i4: tensors and basis dimensions differ");
  detail::check_particles({alpha, beta, gamma}, n_particles, "invariant_i4");
  const std::int64_t dim = dense_dimension(basis.d, n_particles);
  const std::vector<Matrix> ga = detail::embedded_generators(basis, alpha, n_particles);
  const std::vector<Matrix> gb = detail::embedded_generators(basis, beta, n_particles);
  const std::vector<Matrix> gc = detail::embedded_generators(basis, gamma, n_particles);

  Matrix m = Matrix::Zero(dim, dim);
  const int n = basis.size();
  const std::vector<double> D = tensors.d_sym.dense();
  const std::size_t nn = static_cast<std::size_t>(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix gij;
      bool have = false;
      for (int k = 0; k < n; ++k) {
        const double v = D[(static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j)) * nn +
                           static_cast<std::size_t>(k)];
        if (v == 0.0) continue;
        if (!have) {
          gij = ga[static_cast<std::size_t>(i)] * gb[static_cast<std::size_t>(j)];
          have = true;
        }
        m += v * (gij * gc[static_cast<std::size_t>(k)]);
      }
    }
  return {InvariantKind::i4, {alpha, beta, gamma}, 4,
          {basis.d, n_particles, std::move(m),
           "I4(" + std::to_string(alpha) + "," + std::to_string(beta) + "," +
               std::to_string(gamma) + ")"}};
}

/// Residual of J2 = sum_a C2^(a) + 2 sum_{a<b} I2(a,b) on the full space.
inline double j2_pairwise_decomposition_residual(const GeneratorBasis& basis,
                                                 const CollectiveErrorSet& set) {
  const InvariantOperator j2 = collective_j2(set);
  Matrix rhs = Matrix::Zero(j2.op.matrix.rows(), j2.op.matrix.cols());
  const Matrix c2 = casimir_c2(basis);
  for (int alpha = 0; alpha < set.n_particles; ++alpha)
    rhs += embed(c2, alpha, set.n_particles).matrix;
  for (int alpha = 0; alpha < set.n_particles; ++alpha)
    for (int beta = alpha + 1; beta < set.n_particles; ++beta)
      rhs += 2.0 * invariant_i2(basis, alpha, beta, set.n_particles).op.matrix;
  return max_abs(j2.op.matrix - rhs);
}

struct J3ClassFit {
  std::string class_name;
  std::vector<std::string> span_labels;
  std::vector<Complex> coefficients;
  double fit_residual = 0.0;
};

struct J3Report {
  int d = 0;
  int n_particles = 0;
  double partition_residual = 0.0;
  std::vector<J3ClassFit> classes;
};

/// Expands J3 = f_ijk f_klm f_mni S_j S_l S_n by particle-index class and
/// fits each class onto the span it is expected to occupy: all-same onto the
/// single-particle Casimirs, two-same onto identity plus the I2 family,
/// all-different onto the I3 family.  Fits use a pseudo-inverse with a 1e-10
/// singular-value cutoff.
inline J3Report verify_j3_decomposition(const GeneratorBasis& basis,
                                        const StructureTensors& tensors, int n_particles) {
  if (n_particles < 3)
    throw std::invalid_argument("verify_j3_decomposition: needs at least 3 particles");
  if (tensors.d != basis.d)
    throw std::invalid_argument("verify_j3_decomposition: tensors and basis dimensions differ");

  const int d = basis.d;
  const int n = basis.size();
  const std::int64_t dim = dense_dimension(d, n_particles);
  const std::size_t nn = static_cast<std::size_t>(n);
  const std::vector<double> F = tensors.f.dense();

  // c_jln = f_ijk f_klm f_mni = Tr(A_j A_l A_n) with (A_j)_ik = f_ijk.
  std::vector<Eigen::MatrixXd> slice(nn);
  for (int j = 0; j < n; ++j) {
    slice[static_cast<std::size_t>(j)].resize(n, n);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        slice[static_cast<std::size_t>(j)](i, k) =
            F[(static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j)) * nn +
              static_cast<std::size_t>(k)];
  }
  std::vector<double> c(nn * nn * nn, 0.0);
  const auto cat = [&](int j, int l, int m) -> double& {
    return c[(static_cast<std::size_t>(j) * nn + static_cast<std::size_t>(l)) * nn +
             static_cast<std::size_t>(m)];
  };
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      const Eigen::MatrixXd prod =
          (slice[static_cast<std::size_t>(j)] * slice[static_cast<std::size_t>(l)]).transpose();
      for (int m = 0; m < n; ++m)
        cat(j, l, m) = prod.cwiseProduct(slice[static_cast<std::size_t>(m)]).sum();
    }

  // Single-particle contractions reused by the class expansions:
  //   head[m]  = sum_jl c_jlm g_j g_l   (first two factors on one particle)
  //   outer[l] = sum_jm c_jlm g_j g_m   (first and last factors together)
  //   tail[j]  = sum_lm c_jlm g_l g_m   (last two factors together)
  Matrix all_same = Matrix::Zero(d, d);
  std::vector<Matrix> head(nn, Matrix::Zero(d, d));
  std::vector<Matrix> outer(nn, Matrix::Zero(d, d));
  std::vector<Matrix> tail(nn, Matrix::Zero(d, d));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const Matrix gab = basis.generators[static_cast<std::size_t>(a)] *
                         basis.generators[static_cast<std::size_t>(b)];
      for (int k = 0; k < n; ++k) {
        const double v_head = cat(a, b, k);
        if (v_head != 0.0) {
          all_same += v_head * (gab * basis.generators[static_cast<std::size_t>(k)]);
          head[static_cast<std::size_t>(k)] += v_head * gab;
        }
        const double v_outer = cat(a, k, b);
        if (v_outer != 0.0) outer[static_cast<std::size_t>(k)] += v_outer * gab;
        const double v_tail = cat(k, a, b);
        if (v_tail != 0.0) tail[static_cast<std::size_t>(k)] += v_tail * gab;
      }
    }

  Matrix class_same = Matrix::Zero(dim, dim);
  for (int alpha = 0; alpha < n_particles; ++alpha)
    class_same += embed(all_same, alpha, n_particles).matrix;

  Matrix class_pair = Matrix::Zero(dim, dim);
  for (int alpha = 0; alpha < n_particles; ++alpha)
    for (int gamma = 0; gamma < n_particles; ++gamma) {
      if (alpha == gamma) continue;
      for (int m = 0; m < n; ++m) {
        if (max_abs(head[static_cast<std::size_t>(m)]) != 0.0)
          class_pair += embed(head[static_cast<std::size_t>(m)], alpha, n_particles).matrix *
                        embed(basis.generators[static_cast<std::size_t>(m)], gamma, n_particles)
                            .matrix;
      }
      for (int l = 0; l < n; ++l) {
        if (max_abs(outer[static_cast<std::size_t>(l)]) != 0.0)
          class_pair += embed(outer[static_cast<std::size_t>(l)], alpha, n_particles).matrix *
                        embed(basis.generators[static_cast<std::size_t>(l)], gamma, n_particles)
                            .matrix;
      }
      for (int j = 0; j < n; ++j) {
        if (max_abs(tail[static_cast<std::size_t>(j)]) != 0.0)
          class_pair += embed(basis.generators[static_cast<std::size_t>(j)], gamma, n_particles)
                            .matrix *
                        embed(tail[static_cast<std::size_t>(j)], alpha, n_particles).matrix;
      }
    }

  Matrix class_distinct = Matrix::Zero(dim, dim);
  {
    std::vector<std::vector<Matrix>> embedded(static_cast<std::size_t>(n_particles));
    for (int p = 0; p < n_particles; ++p)
      embedded[static_cast<std::size_t>(p)] = detail::embedded_generators(basis, p, n_particles);
    for (int alpha = 0; alpha < n_particles; ++alpha)
      for (int beta = 0; beta < n_particles; ++beta) {
        if (beta == alpha) continue;
        for (int gamma = 0; gamma < n_particles; ++gamma) {
          if (gamma == alpha || gamma == beta) continue;
          for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) {
              Matrix gjl;
              bool have = false;
              for (int m = 0; m < n; ++m) {
                const double v = cat(j, l, m);
                if (v == 0.0) continue;
                if (!have) {
                  gjl = embedded[static_cast<std::size_t>(alpha)][static_cast<std::size_t>(j)] *
                        embedded[static_cast<std::size_t>(beta)][static_cast<std::size_t>(l)];
                  have = true;
                }
                class_distinct +=
                    v * (gjl *
                         embedded[static_cast<std::size_t>(gamma)][static_cast<std::size_t>(m)]);
              }
            }
        }
      }
  }

  // Direct expansion for the partition check.
  const CollectiveErrorSet set = collective_set(basis, n_particles);
  Matrix j3 = Matrix::Zero(dim, dim);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) {
      Matrix sjl;
      bool have = false;
      for (int m = 0; m < n; ++m) {
        const double v = cat(j, l, m);
        if (v == 0.0) continue;
        if (!have) {
          sjl = set.operators[static_cast<std::size_t>(j)].matrix *
                set.operators[static_cast<std::size_t>(l)].matrix;
          have = true;
        }
        j3 += v * (sjl * set.operators[static_cast<std::size_t>(m)].matrix);
      }
    }

  J3Report report;
  report.d = d;
  report.n_particles = n_particles;
  report.partition_residual = max_abs(j3 - class_same - class_pair - class_distinct);

  {
    std::vector<Matrix> span;
    std::vector<std::string> labels;
    const Matrix c2 = casimir_c2(basis);
    for (int alpha = 0; alpha < n_particles; ++alpha) {
      span.push_back(embed(c2, alpha, n_particles).matrix);
      labels.push_back("C2(" + std::to_string(alpha) + ")");
    }
    const SpanFit fit = fit_onto_span(class_same, span);
    report.classes.push_back({"all-same", labels, fit.coefficients, fit.residual});
  }
  {
    std::vector<Matrix> span;
    std::vector<std::string> labels;
    span.push_back(Matrix::Identity(dim, dim));
    labels.push_back("I");
    for (int alpha = 0; alpha < n_particles; ++alpha)
      for (int beta = alpha + 1; beta < n_particles; ++beta) {
        span.push_back(invariant_i2(basis, alpha, beta, n_particles).op.matrix);
        labels.push_back("I2(" + std::to_string(alpha) + "," + std::to_string(beta) + ")");
      }
    const SpanFit fit = fit_onto_span(class_pair, span);
    report.classes.push_back({"two-same", labels, fit.coefficients, fit.residual});
  }
  {
    std::vector<Matrix> span;
    std::vector<std::string> labels;
    for (int alpha = 0; alpha < n_particles; ++alpha)
      for (int beta = alpha + 1; beta < n_particles; ++beta)
        for (int gamma = beta + 1; gamma < n_particles; ++gamma) {
          span.push_back(invariant_i3(basis, tensors, alpha, beta, gamma, n_particles).op.matrix);
          labels.push_back("I3(" + std::to_string(alpha) + "," + std::to_string(beta) + "," +
                           std::to_string(gamma) + ")");
        }
    const SpanFit fit = fit_onto_span(class_distinct, span);
    report.classes.push_back({"all-different", labels, fit.coefficients, fit.residual});
  }
  return report;
}

}  // namespace sudkit
