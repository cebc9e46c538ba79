#pragma once

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sudkit/matrix.hpp"
#include "sudkit/su_basis.hpp"

namespace sudkit {

enum class TensorSymmetry { antisymmetric, symmetric };

struct TensorEntry {
  int i, j, k;
  double value;
};

/// Totally (anti)symmetric real 3-tensor stored by canonical representative.
/// Only entries with i <= j <= k are kept (strictly increasing in the
/// antisymmetric case); every other index order is reconstructed from the
/// permutation sign, so the symmetry holds exactly by construction.
class SparseTensor3 {
 public:
  SparseTensor3() = default;
  SparseTensor3(int index_size, TensorSymmetry symmetry)
      : m_size(index_size), m_symmetry(symmetry) {}

  int index_size() const { return m_size; }
  TensorSymmetry symmetry() const { return m_symmetry; }
  const std::vector<TensorEntry>& canonical_entries() const { return m_entries; }

  /// Inserts a canonical entry.  Entries must arrive in lexicographic order.
  void push_canonical(int i, int j, int k, double value) {
    if (i > j || j > k) throw std::invalid_argument("SparseTensor3: entry not canonical");
    if (m_symmetry == TensorSymmetry::antisymmetric && (i == j || j == k))
      throw std::invalid_argument("SparseTensor3: repeated index in antisymmetric tensor");
    if (!m_entries.empty()) {
      const TensorEntry& last = m_entries.back();
      if (std::array{last.i, last.j, last.k} >= std::array{i, j, k})
        throw std::invalid_argument("SparseTensor3: entries must be pushed in lexicographic order");
    }
    m_entries.push_back({i, j, k, value});
  }

  /// Value at an arbitrary index order.
  double value(int i, int j, int k) const {
    if (m_symmetry == TensorSymmetry::antisymmetric && (i == j || j == k || i == k)) return 0.0;
    int sign = 1;
    if (i > j) { std::swap(i, j); sign = -sign; }
    if (j > k) { std::swap(j, k); sign = -sign; }
    if (i > j) { std::swap(i, j); sign = -sign; }
    const TensorEntry* e = find(i, j, k);
    if (!e) return 0.0;
    return m_symmetry == TensorSymmetry::antisymmetric ? sign * e->value : e->value;
  }

  /// Dense copy, flat index (i * n + j) * n + k.
  std::vector<double> dense() const {
    const std::size_t n = static_cast<std::size_t>(m_size);
    std::vector<double> out(n * n * n, 0.0);
    const int sym_sign = m_symmetry == TensorSymmetry::antisymmetric ? -1 : 1;
    for (const TensorEntry& e : m_entries) {
      const std::array<std::array<int, 3>, 6> perms = {{{e.i, e.j, e.k},
                                                        {e.j, e.k, e.i},
                                                        {e.k, e.i, e.j},
                                                        {e.j, e.i, e.k},
                                                        {e.i, e.k, e.j},
                                                        {e.k, e.j, e.i}}};
    for (int p = 0; p < 6; ++p) {
        const auto [a, b, c] = perms[static_cast<std::size_t>(p)];
        const double v = p < 3 ? e.value : sym_sign * e.value;
        out[(static_cast<std::size_t>(a) * n + static_cast<std::size_t>(b)) * n +
            static_cast<std::size_t>(c)] = v;
      }
    }
    return out;
  }

 private:
  const TensorEntry* find(int i, int j, int k) const {
    auto it = std::lower_bound(m_entries.begin(), m_entries.end(), std::array{i, j, k},
                               [](const TensorEntry& e, const std::array<int, 3>& key) {
                                 return std::array{e.i, e.j, e.k} < key;
                               });
    if (it == m_entries.end() || it->i != i || it->j != j || it->k != k) return nullptr;
    return &*it;
  }

  int m_size = 0;
  TensorSymmetry m_symmetry = TensorSymmetry::symmetric;
  std::vector<TensorEntry> m_entries;
};

/// Antisymmetric (f) and symmetric (d) structure constants of su(d).
struct StructureTensors {
  int d = 0;
  SparseTensor3 f;
  SparseTensor3 d_sym;
};

/// Entries below this magnitude are treated as exact zeros when the sparse
/// tensors are assembled.
inline constexpr double kTensorSparsityThreshold = 1e-12;

/// Computes f_ijk = Im Tr(g_i g_j g_k) / 2 and d_ijk = Re Tr(g_i g_j g_k) / 2
/// for the given basis, keeping canonical representatives only.
inline StructureTensors compute_structure_tensors(const GeneratorBasis& basis) {
  const int n = basis.size();
  if (n <= 0 || static_cast<int>(basis.generators.size()) != n)
    throw std::invalid_argument("compute_structure_tensors: malformed basis");

  StructureTensors t;
  t.d = basis.d;
  t.f = SparseTensor3(n, TensorSymmetry::antisymmetric);
  t.d_sym = SparseTensor3(n, TensorSymmetry::symmetric);

  std::vector<Matrix> products(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      products[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)] =
          basis.generators[static_cast<std::size_t>(i)] * basis.generators[static_cast<std::size_t>(j)];

  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const Matrix& gij =
          products[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(j)];
      for (int k = j; k < n; ++k) {
        const Complex trace = (gij * basis.generators[static_cast<std::size_t>(k)]).trace();
        const double f_val = 0.5 * trace.imag();
        const double d_val = 0.5 * trace.real();
        if (i < j && j < k && std::abs(f_val) > kTensorSparsityThreshold)
          t.f.push_canonical(i, j, k, f_val);
        if (std::abs(d_val) > kTensorSparsityThreshold) t.d_sym.push_canonical(i, j, k, d_val);
      }
    }
  }
  return t;
}

}  // namespace sudkit
