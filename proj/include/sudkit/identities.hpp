#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "sudkit/matrix.hpp"
#include "sudkit/structure_tensors.hpp"
#include "sudkit/su_basis.hpp"

namespace sudkit {

enum class IdentityName {
  normalization,
  product_relation,
  jacobi,
  jacobi_like,
  d_trace_zero,
  df_orthogonal,
  ff_contraction,
  dd_contraction,
  ff_product,
  ddf_chain,
  ddd_chain,
};

inline const char* identity_label(IdentityName name) {
  switch (name) {
    case IdentityName::normalization: return "normalization";
    case IdentityName::product_relation: return "product_relation";
    case IdentityName::jacobi: return "jacobi";
    case IdentityName::jacobi_like: return "jacobi_like";
    case IdentityName::d_trace_zero: return "d_trace_zero";
    case IdentityName::df_orthogonal: return "df_orthogonal";
    case IdentityName::ff_contraction: return "ff_contraction";
    case IdentityName::dd_contraction: return "dd_contraction";
    case IdentityName::ff_product: return "ff_product";
    case IdentityName::ddf_chain: return "ddf_chain";
    case IdentityName::ddd_chain: return "ddd_chain";
  }
  return "unknown";
}

struct IdentityReport {
  IdentityName identity;
  double max_residual = 0.0;
  bool passed = false;
  int d = 0;
};

/// Checks the full set of trace and contraction identities satisfied by the
/// structure constants, one report per identity:
///
///   normalization     Tr(g_i g_j) = 2 delta_ij
///   product_relation  g_i g_j = (2/d) delta_ij I + (i f_ijk + d_ijk) g_k
///   jacobi            f_ilm f_jkl + f_jlm f_kil + f_klm f_ijl = 0
///   jacobi_like       f_ilm d_jkl + f_jlm d_kil + f_klm d_ijl = 0
///   d_trace_zero      d_iik = 0
///   df_orthogonal     d_ijk f_ljk = 0
///   ff_contraction    f_ijk f_ljk = d delta_il
///   dd_contraction    d_ijk d_ljk = ((d^2-4)/d) delta_il
///   ff_product        f_ijm f_klm = (2/d)(delta_ik delta_jl - delta_il delta_jk)
///                                   + d_ikm d_jlm - d_jkm d_ilm
///   ddf_chain         d_piq d_qjr f_rkp = ((d^2-4)/(2d)) f_ijk
///   ddd_chain         d_piq d_qjr d_rkp = ((d^2-12)/(2d)) d_ijk
///
/// Residuals are entrywise maxima over all free indices.
inline std::vector<IdentityReport> verify_identities(const StructureTensors& tensors,
                                                     const GeneratorBasis& basis,
                                                     double tol = 1e-10) {
  if (tensors.d != basis.d)
    throw std::invalid_argument("verify_identities: tensors and basis dimensions differ");
  if (!(tol > 0)) throw std::invalid_argument("verify_identities: tol must be positive");

  const int d = basis.d;
  const int n = basis.size();
  const std::size_t nn = static_cast<std::size_t>(n);
  const std::vector<double> F = tensors.f.dense();
  const std::vector<double> D = tensors.d_sym.dense();
  const auto at = [nn](const std::vector<double>& t, int i, int j, int k) {
    return t[(static_cast<std::size_t>(i) * nn + static_cast<std::size_t>(j)) * nn +
             static_cast<std::size_t>(k)];
  };

  std::vector<IdentityReport> reports;
  const auto record = [&](IdentityName name, double residual) {
    reports.push_back({name, residual, residual <= tol, d});
  };

  {
    double r = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Complex tr = (basis.generators[static_cast<std::size_t>(i)] *
                            basis.generators[static_cast<std::size_t>(j)])
                               .trace();
        const double expected = i == j ? 2.0 : 0.0;
        r = std::max(r, std::abs(tr - Complex(expected, 0.0)));
      }
    record(IdentityName::normalization, r);
  }

  {
    double r = 0.0;
    const Matrix id = Matrix::Identity(d, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Matrix rhs = (i == j ? (2.0 / d) : 0.0) * id;
        for (int k = 0; k < n; ++k) {
          const Complex coeff(at(D, i, j, k), at(F, i, j, k));
          if (coeff != Complex(0, 0)) rhs += coeff * basis.generators[static_cast<std::size_t>(k)];
        }
        r = std::max(r, max_abs(basis.generators[static_cast<std::size_t>(i)] *
                                    basis.generators[static_cast<std::size_t>(j)] -
                                rhs));
      }
    record(IdentityName::product_relation, r);
  }

  {
    double r = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int m = 0; m < n; ++m) {
            double sum = 0.0;
            for (int l = 0; l < n; ++l)
              sum += at(F, i, l, m) * at(F, j, k, l) + at(F, j, l, m) * at(F, k, i, l) +
                     at(F, k, l, m) * at(F, i, j, l);
            r = std::max(r, std::abs(sum));
          }
    record(IdentityName::jacobi, r);
  }

  {
    double r = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int m = 0; m < n; ++m) {
            double sum = 0.0;
            for (int l = 0; l < n; ++l)
              sum += at(F, i, l, m) * at(D, j, k, l) + at(F, j, l, m) * at(D, k, i, l) +
                     at(F, k, l, m) * at(D, i, j, l);
            r = std::max(r, std::abs(sum));
          }
    record(IdentityName::jacobi_like, r);
  }

  {
    double r = 0.0;
    for (int k = 0; k < n; ++k) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += at(D, i, i, k);
      r = std::max(r, std::abs(sum));
    }
    record(IdentityName::d_trace_zero, r);
  }

  {
    double r = 0.0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) sum += at(D, i, j, k) * at(F, l, j, k);
        r = std::max(r, std::abs(sum));
      }
    record(IdentityName::df_orthogonal, r);
  }

  {
    double r = 0.0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) sum += at(F, i, j, k) * at(F, l, j, k);
        r = std::max(r, std::abs(sum - (i == l ? static_cast<double>(d) : 0.0)));
      }
    record(IdentityName::ff_contraction, r);
  }

  {
    const double expected = (static_cast<double>(d) * d - 4.0) / d;
    double r = 0.0;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) sum += at(D, i, j, k) * at(D, l, j, k);
        r = std::max(r, std::abs(sum - (i == l ? expected : 0.0)));
      }
    record(IdentityName::dd_contraction, r);
  }

  {
    double r = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            double lhs = 0.0, dd = 0.0;
            for (int m = 0; m < n; ++m) {
              lhs += at(F, i, j, m) * at(F, k, l, m);
              dd += at(D, i, k, m) * at(D, j, l, m) - at(D, j, k, m) * at(D, i, l, m);
            }
            const double delta = (2.0 / d) * ((i == k && j == l ? 1.0 : 0.0) -
                                              (i == l && j == k ? 1.0 : 0.0));
            r = std::max(r, std::abs(lhs - delta - dd));
          }
    record(IdentityName::ff_product, r);
  }

  {
    std::vector<Eigen::MatrixXd> d_slice(nn), f_slice(nn);
    for (int i = 0; i < n; ++i) {
      d_slice[static_cast<std::size_t>(i)].resize(n, n);
      f_slice[static_cast<std::size_t>(i)].resize(n, n);
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          d_slice[static_cast<std::size_t>(i)](p, q) = at(D, p, i, q);
          f_slice[static_cast<std::size_t>(i)](p, q) = at(F, p, i, q);
        }
    }
    const double cf = (static_cast<double>(d) * d - 4.0) / (2.0 * d);
    const double cd = (static_cast<double>(d) * d - 12.0) / (2.0 * d);
    double rf = 0.0, rd = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Eigen::MatrixXd prod =
            (d_slice[static_cast<std::size_t>(i)] * d_slice[static_cast<std::size_t>(j)]).transpose();
        for (int k = 0; k < n; ++k) {
          const double lhs_f = prod.cwiseProduct(f_slice[static_cast<std::size_t>(k)]).sum();
          const double lhs_d = prod.cwiseProduct(d_slice[static_cast<std::size_t>(k)]).sum();
          rf = std::max(rf, std::abs(lhs_f - cf * at(F, i, j, k)));
          rd = std::max(rd, std::abs(lhs_d - cd * at(D, i, j, k)));
        }
      }
    record(IdentityName::ddf_chain, rf);
    record(IdentityName::ddd_chain, rd);
  }

  return reports;
}

}  // namespace sudkit
