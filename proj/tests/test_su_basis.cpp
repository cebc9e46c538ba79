#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sudkit/identities.hpp"
#include "sudkit/structure_tensors.hpp"
#include "sudkit/su_basis.hpp"

using namespace sudkit;

namespace {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace

TEST_CASE("basis for d=2 is the pauli triple") {
  const GeneratorBasis basis = build_basis(2);
  REQUIRE(basis.size() == 3);
  CHECK(max_abs(basis.generators[0] - pauli_x()) == 0.0);
  CHECK(max_abs(basis.generators[1] - pauli_y()) == 0.0);
  CHECK(max_abs(basis.generators[2] - pauli_z()) == 0.0);
}

TEST_CASE("basis rejects dimensions below 2") {
  CHECK_THROWS_AS(build_basis(1), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(0), std::invalid_argument);
  CHECK_THROWS_AS(build_basis(-3), std::invalid_argument);
}

TEST_CASE("diagonal generators for d=3 match the closed form") {
  const GeneratorBasis basis = build_basis(3);
  REQUIRE(basis.size() == 8);

  Matrix first = Matrix::Zero(3, 3);
  first(0, 0) = 1.0;
  first(1, 1) = -1.0;
  Matrix second = Matrix::Zero(3, 3);
  const double s = 1.0 / std::sqrt(3.0);
  second(0, 0) = s;
  second(1, 1) = s;
  second(2, 2) = -2.0 * s;

  CHECK(max_abs(basis.generators[static_cast<std::size_t>(diagonal_index(3, 1))] - first) <=
        1e-15);
  CHECK(max_abs(basis.generators[static_cast<std::size_t>(diagonal_index(3, 2))] - second) <=
        1e-15);
}

TEST_CASE("generators are hermitian traceless and pairwise orthonormal") {
  for (int d = 2; d <= 6; ++d) {
    const GeneratorBasis basis = build_basis(d);
    REQUIRE(static_cast<int>(basis.generators.size()) == d * d - 1);
    for (const Matrix& g : basis.generators) {
      CHECK(max_abs(g - g.adjoint()) == 0.0);
      CHECK(std::abs(g.trace()) <= 1e-14);
    }
    for (std::size_t i = 0; i < basis.generators.size(); ++i)
      for (std::size_t j = 0; j < basis.generators.size(); ++j) {
        const Complex tr = (basis.generators[i] * basis.generators[j]).trace();
        const double expected = i == j ? 2.0 : 0.0;
        CHECK(std::abs(tr - Complex(expected, 0)) <= 1e-13);
      }
  }
}

TEST_CASE("f tensor for d=2 is the levi-civita tensor") {
  const GeneratorBasis basis = build_basis(2);
  const StructureTensors tensors = compute_structure_tensors(basis);
  CHECK(tensors.f.value(0, 1, 2) == Catch::Approx(1.0).margin(1e-14));
  CHECK(tensors.f.value(1, 2, 0) == Catch::Approx(1.0).margin(1e-14));
  CHECK(tensors.f.value(1, 0, 2) == Catch::Approx(-1.0).margin(1e-14));
  CHECK(tensors.f.value(0, 0, 2) == 0.0);
  CHECK(tensors.f.canonical_entries().size() == 1);
}

TEST_CASE("d tensor vanishes identically for d=2") {
  const StructureTensors tensors = compute_structure_tensors(build_basis(2));
  CHECK(tensors.d_sym.canonical_entries().empty());
}

TEST_CASE("su2 subalgebra triples carry unit f for d=2 and d=3") {
  for (int d = 2; d <= 3; ++d) {
    const GeneratorBasis basis = build_basis(d);
    const StructureTensors tensors = compute_structure_tensors(basis);
    const int i = symmetric_index(d, 0, 1);
    const int j = antisymmetric_index(d, 0, 1);
    const int k = diagonal_index(d, 1);
    CHECK(tensors.f.value(i, j, k) == Catch::Approx(1.0).margin(1e-14));
  }
}

TEST_CASE("d tensor couples the first symmetric pair to the last diagonal for d=3") {
  const StructureTensors tensors = compute_structure_tensors(build_basis(3));
  const int i = symmetric_index(3, 0, 1);
  const int k = diagonal_index(3, 2);
  CHECK(tensors.d_sym.value(i, i, k) == Catch::Approx(1.0 / std::sqrt(3.0)).margin(1e-14));
}

TEST_CASE("f from traces matches f from commutators") {
  for (int d = 2; d <= 5; ++d) {
    const GeneratorBasis basis = build_basis(d);
    const StructureTensors tensors = compute_structure_tensors(basis);
    const int n = basis.size();
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Matrix comm = basis.generators[static_cast<std::size_t>(i)] *
                                basis.generators[static_cast<std::size_t>(j)] -
                            basis.generators[static_cast<std::size_t>(j)] *
                                basis.generators[static_cast<std::size_t>(i)];
        for (int k = 0; k < n; ++k) {
          const Complex tr = (comm * basis.generators[static_cast<std::size_t>(k)]).trace();
          const double from_commutator = (tr / Complex(0, 4)).real();
          worst = std::max(worst, std::abs(from_commutator - tensors.f.value(i, j, k)));
        }
      }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("product relation reconstructs every generator product") {
  for (int d = 2; d <= 5; ++d) {
    const GeneratorBasis basis = build_basis(d);
    const StructureTensors tensors = compute_structure_tensors(basis);
    const int n = basis.size();
    const Matrix id = Matrix::Identity(d, d);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Matrix rhs = (i == j ? 2.0 / d : 0.0) * id;
        for (int k = 0; k < n; ++k)
          rhs += Complex(tensors.d_sym.value(i, j, k), tensors.f.value(i, j, k)) *
                 basis.generators[static_cast<std::size_t>(k)];
        worst = std::max(worst, max_abs(basis.generators[static_cast<std::size_t>(i)] *
                                            basis.generators[static_cast<std::size_t>(j)] -
                                        rhs));
      }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("stored tensors respect their symmetry exactly under transposition") {
  std::mt19937 rng(20240817);
  for (int d : {2, 3, 4, 5}) {
    const StructureTensors tensors = compute_structure_tensors(build_basis(d));
    std::uniform_int_distribution<int> pick(0, d * d - 2);
    for (int probe = 0; probe < 200; ++probe) {
      const int i = pick(rng), j = pick(rng), k = pick(rng);
      CHECK(tensors.f.value(i, j, k) == -tensors.f.value(j, i, k));
      CHECK(tensors.f.value(i, j, k) == -tensors.f.value(i, k, j));
      CHECK(tensors.f.value(i, j, k) == tensors.f.value(j, k, i));
      CHECK(tensors.d_sym.value(i, j, k) == tensors.d_sym.value(j, i, k));
      CHECK(tensors.d_sym.value(i, j, k) == tensors.d_sym.value(i, k, j));
      CHECK(tensors.d_sym.value(i, j, k) == tensors.d_sym.value(j, k, i));
    }
  }
}

TEST_CASE("stored entries all clear the sparsity threshold") {
  for (int d : {2, 3, 4, 5}) {
    const StructureTensors tensors = compute_structure_tensors(build_basis(d));
    for (const TensorEntry& e : tensors.f.canonical_entries())
      CHECK(std::abs(e.value) > kTensorSparsityThreshold);
    for (const TensorEntry& e : tensors.d_sym.canonical_entries())
      CHECK(std::abs(e.value) > kTensorSparsityThreshold);
  }
}

TEST_CASE("identity suite passes at 1e-10 for d=2 through d=5") {
  for (int d = 2; d <= 5; ++d) {
    const GeneratorBasis basis = build_basis(d);
    const StructureTensors tensors = compute_structure_tensors(basis);
    const std::vector<IdentityReport> reports = verify_identities(tensors, basis, 1e-10);
    REQUIRE(reports.size() == 11);
    for (const IdentityReport& r : reports) {
      INFO("d=" << d << " identity=" << identity_label(r.identity)
                << " residual=" << r.max_residual);
      CHECK(r.passed);
    }
  }
}

TEST_CASE("identity suite rejects mismatched basis and tensors") {
  const GeneratorBasis basis2 = build_basis(2);
  const StructureTensors tensors3 = compute_structure_tensors(build_basis(3));
  CHECK_THROWS_AS(verify_identities(tensors3, basis2), std::invalid_argument);
  const StructureTensors tensors2 = compute_structure_tensors(basis2);
  CHECK_THROWS_AS(verify_identities(tensors2, basis2, 0.0), std::invalid_argument);
}
