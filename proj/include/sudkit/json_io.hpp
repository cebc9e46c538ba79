#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

#include "sudkit/dfs.hpp"
#include "sudkit/identities.hpp"
#include "sudkit/invariants.hpp"
#include "sudkit/matrix.hpp"
#include "sudkit/multiparticle.hpp"
#include "sudkit/structure_tensors.hpp"
#include "sudkit/su_basis.hpp"

namespace sudkit {

using json = nlohmann::json;

inline json matrix_to_json(const Matrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json re_row = json::array(), im_row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re_row.push_back(m(r, c).real());
      im_row.push_back(m(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  return json{{"re", std::move(re)}, {"im", std::move(im)}};
}

inline Matrix matrix_from_json(const json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (!re.is_array() || !im.is_array() || re.size() != im.size() || re.empty())
    throw std::invalid_argument("matrix_from_json: re/im must be equal-shaped arrays");
  const Eigen::Index rows = static_cast<Eigen::Index>(re.size());
  const Eigen::Index cols = static_cast<Eigen::Index>(re.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& re_row = re.at(static_cast<std::size_t>(r));
    const auto& im_row = im.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(re_row.size()) != cols ||
        static_cast<Eigen::Index>(im_row.size()) != cols)
      throw std::invalid_argument("matrix_from_json: ragged matrix rows");
    for (Eigen::Index c = 0; c < cols; ++c)
      m(r, c) = Complex(re_row.at(static_cast<std::size_t>(c)).get<double>(),
                        im_row.at(static_cast<std::size_t>(c)).get<double>());
  }
  return m;
}

inline json basis_to_json(const GeneratorBasis& basis) {
  json generators = json::array();
  for (const Matrix& g : basis.generators) generators.push_back(matrix_to_json(g));
  return json{{"d", basis.d}, {"ordering", basis.ordering}, {"generators", std::move(generators)}};
}

/// One tensor as {d, tensor, symmetry, canonical, entries}; entries are
/// [i, j, k, value] sorted lexicographically.  Canonical mode keeps only the
/// representative index order; full mode expands every nonzero entry.
inline json tensor_to_json(const SparseTensor3& tensor, int d, const std::string& name,
                           bool full) {
  json entries = json::array();
  if (full) {
    const int n = tensor.index_size();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double v = tensor.value(i, j, k);
          if (v != 0.0) entries.push_back(json::array({i, j, k, v}));
        }
  } else {
    for (const TensorEntry& e : tensor.canonical_entries())
      entries.push_back(json::array({e.i, e.j, e.k, e.value}));
  }
  return json{{"d", d},
              {"tensor", name},
              {"symmetry",
               tensor.symmetry() == TensorSymmetry::antisymmetric ? "antisymmetric" : "symmetric"},
              {"canonical", !full},
              {"entries", std::move(entries)}};
}

inline json structure_tensors_to_json(const StructureTensors& tensors, bool full) {
  return json{{"d", tensors.d},
              {"f", tensor_to_json(tensors.f, tensors.d, "f", full)},
              {"d_sym", tensor_to_json(tensors.d_sym, tensors.d, "d", full)}};
}

inline json identity_reports_to_json(const std::vector<IdentityReport>& reports, double tol) {
  json identities = json::array();
  bool all_passed = true;
  int d = 0;
  for (const IdentityReport& r : reports) {
    identities.push_back(json{{"name", identity_label(r.identity)},
                              {"max_residual", r.max_residual},
                              {"passed", r.passed}});
    all_passed = all_passed && r.passed;
    d = r.d;
  }
  return json{{"d", d}, {"tol", tol}, {"identities", std::move(identities)},
              {"all_passed", all_passed}};
}

inline json operator_to_json(const ManyBodyOperator& op) {
  json j = matrix_to_json(op.matrix);
  j["d"] = op.d;
  j["n"] = op.n_particles;
  j["label"] = op.label;
  return j;
}

inline ManyBodyOperator operator_from_json(const json& j) {
  ManyBodyOperator op;
  op.d = j.at("d").get<int>();
  op.n_particles = j.at("n").get<int>();
  op.label = j.value("label", "");
  op.matrix = matrix_from_json(j);
  const std::int64_t dim = dense_dimension(op.d, op.n_particles);
  if (op.matrix.rows() != dim || op.matrix.cols() != dim)
    throw std::invalid_argument("operator_from_json: matrix shape does not match d^n");
  return op;
}

inline json invariant_to_json(const InvariantOperator& invariant, double centrality_residual) {
  json spectrum = json::array();
  const RealVector w = hermitian_spectrum(invariant.op.matrix);
  for (Eigen::Index i = 0; i < w.size(); ++i) spectrum.push_back(w(i));
  return json{{"kind", invariant_label(invariant.kind)},
              {"particles", invariant.particles},
              {"d", invariant.op.d},
              {"n", invariant.op.n_particles},
              {"order", invariant.order},
              {"label", invariant.op.label},
              {"normalization", "unit-contraction"},
              {"spectrum", std::move(spectrum)},
              {"centrality_residual", centrality_residual}};
}

inline json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

inline json j3_report_to_json(const J3Report& report) {
  json classes = json::array();
  for (const J3ClassFit& c : report.classes) {
    json coefficients = json::array();
    for (const Complex& z : c.coefficients) coefficients.push_back(complex_to_json(z));
    classes.push_back(json{{"name", c.class_name},
                           {"span", c.span_labels},
                           {"coefficients", std::move(coefficients)},
                           {"fit_residual", c.fit_residual}});
  }
  return json{{"d", report.d},
              {"n", report.n_particles},
              {"partition_residual", report.partition_residual},
              {"classes", std::move(classes)}};
}

inline json decomposition_to_json(const DfsDecomposition& decomposition) {
  json blocks = json::array();
  for (const DfsBlock& b : decomposition.blocks) {
    json basis = json::array();
    for (Eigen::Index c = 0; c < b.basis.cols(); ++c) {
      json column = json::array();
      for (Eigen::Index r = 0; r < b.basis.rows(); ++r)
        column.push_back(complex_to_json(b.basis(r, c)));
      basis.push_back(std::move(column));
    }
    json jb{{"id", b.id},
            {"irrep_dim", b.irrep_dim},
            {"multiplicity", b.multiplicity},
            {"casimir_value", b.casimir_value},
            {"basis", std::move(basis)}};
    if (b.j_label) jb["j_label"] = *b.j_label;
    if (!b.weight_labels.empty()) jb["weights"] = b.weight_labels;
    blocks.push_back(std::move(jb));
  }
  return json{{"d", decomposition.d}, {"n", decomposition.n_particles},
              {"blocks", std::move(blocks)}};
}

inline json compatibility_to_json(const CompatibilityReport& report) {
  json leakage = json::array();
  for (Eigen::Index r = 0; r < report.leakage.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < report.leakage.cols(); ++c) row.push_back(report.leakage(r, c));
    leakage.push_back(std::move(row));
  }
  json blocks = json::array();
  for (std::size_t b = 0; b < report.preserves_block.size(); ++b)
    blocks.push_back(json{{"id", static_cast<int>(b)},
                          {"preserved", static_cast<bool>(report.preserves_block[b])},
                          {"note", report.notes[b]}});
  return json{{"commutation_residual", report.commutation_residual},
              {"commutes", report.commutes},
              {"leakage", std::move(leakage)},
              {"blocks", std::move(blocks)}};
}

}  // namespace sudkit
