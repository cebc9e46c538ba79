#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sudkit/invariants.hpp"
#include "sudkit/linalg.hpp"
#include "sudkit/matrix.hpp"
#include "sudkit/multiparticle.hpp"
#include "sudkit/structure_tensors.hpp"
#include "sudkit/su_basis.hpp"

namespace sudkit {

/// Raised when eigenvalue gaps are too marginal to cluster, or when a block
/// does not factor as (irrep dimension) x (multiplicity).
class DegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DfsBlock {
  int id = 0;
  int irrep_dim = 0;
  int multiplicity = 0;
  double casimir_value = 0.0;
  /// d = 2 only: total angular momentum label with casimir = 4 j (j + 1).
  std::optional<double> j_label;
  /// d = 2 only: S_z eigenvalue / 2 per basis column.
  std::vector<double> weight_labels;
  /// Orthonormal columns spanning the block, phase-fixed so the first
  /// component above 1e-12 is real and positive.
  Matrix basis;
};

struct DfsDecomposition {
  int d = 0;
  int n_particles = 0;
  std::vector<DfsBlock> blocks;

  std::int64_t total_dimension() const {
    std::int64_t t = 0;
    for (const DfsBlock& b : blocks) t += static_cast<std::int64_t>(b.irrep_dim) * b.multiplicity;
    return t;
  }
};

namespace detail {

/// Splits ascending eigenvalues into clusters.  Gaps below 10 * tol merge,
/// gaps above the relative threshold 1e-8 split, anything in between is
/// refused rather than guessed at.
inline std::vector<std::pair<int, int>> cluster_eigenvalues(const RealVector& w, double tol) {
  const double scale = std::max({1.0, std::abs(w(0)), std::abs(w(w.size() - 1))});
  const double merge_below = 10.0 * tol * scale;
  const double split_above = std::max(1e-8 * scale, merge_below);
  std::vector<std::pair<int, int>> ranges;
  int start = 0;
  for (Eigen::Index i = 1; i < w.size(); ++i) {
    const double gap = w(i) - w(i - 1);
    if (gap >= split_above) {
      ranges.emplace_back(start, static_cast<int>(i));
      start = static_cast<int>(i);
    } else if (gap >= merge_below) {
      std::ostringstream msg;
      msg << "decompose: ambiguous eigenvalue gap " << gap << " between " << w(i - 1) << " and "
          << w(i) << " (merge below " << merge_below << ", split above " << split_above << ")";
      throw DegeneracyError(msg.str());
    }
  }
  ranges.emplace_back(start, static_cast<int>(w.size()));
  return ranges;
}

/// Multiplicity of the irrep carried by one isotypic block.  Small blocks go
/// through the commutant of the restricted collective algebra; its dimension
/// must be a perfect square m^2.  Larger blocks use the eigenvalue
/// multiplicities of a generic Hermitian element of that algebra, which are
/// constant and equal to m on an isotypic block.  The generic element alone
/// cannot tell one irrep of dimension n from two inequivalent irreps of equal
/// multiplicity, so its eigenvalue groups must additionally be linked to each
/// other by the algebra: a group disconnected from the rest sits in a
/// different irrep type and the block is rejected.
inline int block_multiplicity(const std::vector<Matrix>& restricted, std::uint64_t seed,
                              int block_id) {
  const Eigen::Index dim = restricted.front().rows();
  if (dim <= 32) {
    const int nullity = commutant_dimension(restricted);
    const int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(nullity))));
    if (m * m != nullity) {
      std::ostringstream msg;
      msg << "decompose: block " << block_id << " has commutant dimension " << nullity
          << ", not a perfect square; inequivalent irreps may share a Casimir value";
      throw DegeneracyError(msg.str());
    }
    return m;
  }

  std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(block_id + 1));
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int attempt = 0; attempt < 3; ++attempt) {
    Matrix x = Matrix::Zero(dim, dim);
    for (const Matrix& s : restricted) x += coeff(rng) * s;
    for (std::size_t a = 0; a < restricted.size(); ++a)
      for (std::size_t b = a; b < restricted.size(); ++b)
        x += coeff(rng) * (restricted[a] * restricted[b] + restricted[b] * restricted[a]);
    Eigen::SelfAdjointEigenSolver<Matrix> es(x);
    const RealVector w = es.eigenvalues();
    const double scale = std::max({1.0, std::abs(w(0)), std::abs(w(w.size() - 1))});
    std::vector<int> counts;
    int run = 1;
    for (Eigen::Index i = 1; i < w.size(); ++i) {
      if (w(i) - w(i - 1) > 1e-8 * scale) {
        counts.push_back(run);
        run = 1;
      } else {
        ++run;
      }
    }
    counts.push_back(run);
    const int m = counts.front();
    if (!std::all_of(counts.begin(), counts.end(), [m](int c) { return c == m; })) continue;

    const int groups = static_cast<int>(dim) / m;
    const Matrix& v = es.eigenvectors();
    std::vector<Matrix> words;
    words.reserve(restricted.size() * (restricted.size() + 3) / 2);
    for (const Matrix& s : restricted) words.push_back(v.adjoint() * s * v);
    for (std::size_t a = 0; a < restricted.size(); ++a)
      for (std::size_t b = a; b < restricted.size(); ++b)
        words.push_back(v.adjoint() *
                        (restricted[a] * restricted[b] + restricted[b] * restricted[a]) * v);

    double word_scale = 0.0;
    for (const Matrix& word : words) word_scale = std::max(word_scale, max_abs(word));
    const double link_threshold = 1e-8 * word_scale;

    std::vector<int> parent(static_cast<std::size_t>(groups));
    for (int g = 0; g < groups; ++g) parent[static_cast<std::size_t>(g)] = g;
    const auto find = [&parent](int g) {
      while (parent[static_cast<std::size_t>(g)] != g) {
        parent[static_cast<std::size_t>(g)] =
            parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(g)])];
        g = parent[static_cast<std::size_t>(g)];
      }
      return g;
    };
    for (const Matrix& word : words)
      for (int ga = 0; ga < groups; ++ga)
        for (int gb = ga + 1; gb < groups; ++gb) {
          if (find(ga) == find(gb)) continue;
          if (max_abs(word.block(ga * m, gb * m, m, m)) > link_threshold)
            parent[static_cast<std::size_t>(find(ga))] = find(gb);
        }
    int components = 0;
    for (int g = 0; g < groups; ++g)
      if (find(g) == g) ++components;
    if (components > 1) {
      std::ostringstream msg;
      msg << "decompose: block " << block_id << " splits into " << components
          << " families not linked by the collective algebra; inequivalent irreps share this "
             "Casimir value";
      throw DegeneracyError(msg.str());
    }
    return m;
  }
  std::ostringstream msg;
  msg << "decompose: block " << block_id
      << " shows unequal eigenvalue multiplicities for generic algebra elements; "
         "inequivalent irreps may share a Casimir value";
  throw DegeneracyError(msg.str());
}

}  // namespace detail

/// Splits the n-particle space into isotypic blocks of the collective
/// algebra: eigenspaces of J2, refined for d = 2 by S_z, with multiplicity
/// and irrep dimension read off per block.  A noiseless subsystem of
/// multiplicity m >= 2 encodes an m-dimensional logical space.
inline DfsDecomposition decompose(const CollectiveErrorSet& set, double tol = 1e-10,
                                  std::uint64_t seed = 12345) {
  if (!(tol > 0)) throw std::invalid_argument("decompose: tol must be positive");
  if (set.operators.empty()) throw std::invalid_argument("decompose: empty collective set");

  const InvariantOperator j2 = collective_j2(set);
  Eigen::SelfAdjointEigenSolver<Matrix> es(j2.op.matrix);
  const RealVector w = es.eigenvalues();
  const Matrix& vecs = es.eigenvectors();

  std::vector<std::pair<int, int>> ranges = detail::cluster_eigenvalues(w, tol);
  // Largest Casimir value first.
  std::reverse(ranges.begin(), ranges.end());

  DfsDecomposition decomposition;
  decomposition.d = set.d;
  decomposition.n_particles = set.n_particles;

  for (std::size_t r = 0; r < ranges.size(); ++r) {
    const auto [start, end] = ranges[r];
    const int block_dim = end - start;
    DfsBlock block;
    block.id = static_cast<int>(r);
    block.basis = vecs.middleCols(start, block_dim);
    block.casimir_value = w.segment(start, block_dim).mean();

    if (set.d == 2) {
      // Canonical ordering puts sigma_z third, so S_z is operator index 2.
      const Matrix sz = block.basis.adjoint() * set.operators[2].matrix * block.basis;
      Eigen::SelfAdjointEigenSolver<Matrix> zs(sz);
      block.basis = block.basis * zs.eigenvectors();
      block.weight_labels.resize(static_cast<std::size_t>(block_dim));
      for (int c = 0; c < block_dim; ++c)
        block.weight_labels[static_cast<std::size_t>(c)] = zs.eigenvalues()(c) / 2.0;
      const double j_raw = 0.5 * (std::sqrt(1.0 + block.casimir_value) - 1.0);
      block.j_label = std::round(2.0 * j_raw) / 2.0;
    }
    fix_column_phases(block.basis);

    std::vector<Matrix> restricted;
    restricted.reserve(set.operators.size());
    for (const ManyBodyOperator& s : set.operators)
      restricted.push_back(block.basis.adjoint() * s.matrix * block.basis);
    block.multiplicity = detail::block_multiplicity(restricted, seed, block.id);
    if (block_dim % block.multiplicity != 0) {
      std::ostringstream msg;
      msg << "decompose: block " << block.id << " of dimension " << block_dim
          << " is not divisible by multiplicity " << block.multiplicity;
      throw DegeneracyError(msg.str());
    }
    block.irrep_dim = block_dim / block.multiplicity;
    decomposition.blocks.push_back(std::move(block));
  }

  if (decomposition.total_dimension() != static_cast<std::int64_t>(j2.op.matrix.rows()))
    throw std::logic_error("decompose: block dimensions do not add up to the full space");
  return decomposition;
}

/// Logical Pauli operators on the three-particle DFS, built purely from
/// pairwise and triple invariants.
struct LogicalOperators {
  int d = 0;
  ManyBodyOperator x_bar, y_bar, z_bar;
};

inline LogicalOperators logical_paulis(const GeneratorBasis& basis,
                                       const StructureTensors& tensors) {
  constexpr int n_particles = 3;
  const double s3 = std::sqrt(3.0);
  const Matrix i2_01 = invariant_i2(basis, 0, 1, n_particles).op.matrix;
  const Matrix i2_02 = invariant_i2(basis, 0, 2, n_particles).op.matrix;
  const Matrix i2_12 = invariant_i2(basis, 1, 2, n_particles).op.matrix;
  const Matrix i3 = invariant_i3(basis, tensors, 0, 1, 2, n_particles).op.matrix;

  LogicalOperators ops;
  ops.d = basis.d;
  ops.x_bar = {basis.d, n_particles, (i2_12 - i2_02) / (2.0 * s3), "X_bar"};
  ops.y_bar = {basis.d, n_particles, i3 / (2.0 * s3), "Y_bar"};
  ops.z_bar = {basis.d, n_particles, (i2_12 + i2_02 - 2.0 * i2_01) / 6.0, "Z_bar"};
  return ops;
}

/// Exchange gate U = exp(-i (pi/4) I2(alpha, beta)).  On the swapped pair it
/// acts as |p q> -> -i e^{i pi / 2d} |q p>.
inline ManyBodyOperator exchange_gate(const GeneratorBasis& basis, int alpha, int beta,
                                      int n_particles) {
  if (alpha == beta) throw std::invalid_argument("exchange_gate: particles must be distinct");
  const Matrix i2 = invariant_i2(basis, alpha, beta, n_particles).op.matrix;
  Matrix u = matrix_exponential((Complex(0, -1) * (std::numbers::pi / 4.0) * i2).eval());
  return {basis.d, n_particles, std::move(u),
          "exchange(" + std::to_string(alpha) + "," + std::to_string(beta) + ")"};
}

/// Phase predicted for the exchange gate matrix element <q p|U|p q>.
inline Complex exchange_expected_phase(int d) {
  return Complex(0, -1) * std::exp(Complex(0, std::numbers::pi / (2.0 * d)));
}

struct CompatibilityReport {
  double commutation_residual = 0.0;
  bool commutes = false;
  /// Max-norm of the matrix of h between blocks b (row) and b' (column).
  Eigen::MatrixXd leakage;
  std::vector<bool> preserves_block;
  std::vector<std::string> notes;
};

/// Checks whether a Hamiltonian leaves the decomposition alone: commutation
/// with every collective operator is sufficient; the leakage table reports
/// block preservation independently.
inline CompatibilityReport compatibility_check(const ManyBodyOperator& h,
                                               const DfsDecomposition& decomposition,
                                               const CollectiveErrorSet& set,
                                               double tol = 1e-10) {
  if (h.d != set.d || h.n_particles != set.n_particles)
    throw std::invalid_argument("compatibility_check: operator and set act on different spaces");
  if (decomposition.d != set.d || decomposition.n_particles != set.n_particles)
    throw std::invalid_argument("compatibility_check: decomposition belongs to a different space");

  CompatibilityReport report;
  const CommutationReport comm = commutes_with_all(h, set, tol);
  report.commutation_residual = comm.max_residual;
  report.commutes = comm.commutes;

  const int nb = static_cast<int>(decomposition.blocks.size());
  report.leakage = Eigen::MatrixXd::Zero(nb, nb);
  for (int b = 0; b < nb; ++b)
    for (int b2 = 0; b2 < nb; ++b2) {
      if (b == b2) continue;
      report.leakage(b, b2) =
          max_abs(decomposition.blocks[static_cast<std::size_t>(b)].basis.adjoint() * h.matrix *
                  decomposition.blocks[static_cast<std::size_t>(b2)].basis);
    }

  for (int b = 0; b < nb; ++b) {
    const double out = nb > 1 ? std::max(report.leakage.row(b).maxCoeff(),
                                         report.leakage.col(b).maxCoeff())
                              : 0.0;
    const bool preserved = out <= tol;
    report.preserves_block.push_back(preserved);
    const DfsBlock& block = decomposition.blocks[static_cast<std::size_t>(b)];
    std::ostringstream note;
    note << "block " << block.id << " (n=" << block.irrep_dim << ", m=" << block.multiplicity
         << "): " << (preserved ? "preserved" : "leakage up to ");
    if (!preserved) note << out;
    report.notes.push_back(note.str());
  }
  return report;
}

}  // namespace sudkit
