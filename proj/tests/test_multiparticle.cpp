#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "sudkit/linalg.hpp"
#include "sudkit/multiparticle.hpp"
#include "sudkit/structure_tensors.hpp"
#include "sudkit/su_basis.hpp"

using namespace sudkit;

namespace {

Matrix random_matrix(int d, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = Complex(u(rng), u(rng));
  return m;
}

}  // namespace

TEST_CASE("embedding places sigma_z on the chosen factor") {
  const GeneratorBasis basis = build_basis(2);
  const Matrix& sz = basis.generators[2];

  const ManyBodyOperator left = embed(sz, 0, 2);
  Matrix expected_left = Matrix::Zero(4, 4);
  expected_left.diagonal() << 1, 1, -1, -1;
  CHECK(max_abs(left.matrix - expected_left) == 0.0);

  const ManyBodyOperator right = embed(sz, 1, 2);
  Matrix expected_right = Matrix::Zero(4, 4);
  expected_right.diagonal() << 1, -1, 1, -1;
  CHECK(max_abs(right.matrix - expected_right) == 0.0);
}

TEST_CASE("embedding rejects out-of-range and malformed input") {
  const GeneratorBasis basis = build_basis(2);
  CHECK_THROWS_AS(embed(basis.generators[0], 2, 2), std::invalid_argument);
  CHECK_THROWS_AS(embed(basis.generators[0], -1, 2), std::invalid_argument);
  CHECK_THROWS_AS(embed(Matrix::Zero(2, 3), 0, 2), std::invalid_argument);
  CHECK_THROWS_AS(embed(Matrix::Zero(1, 1), 0, 2), std::invalid_argument);
}

TEST_CASE("dense dimension cap is enforced before allocation") {
  CHECK(dense_dimension(2, 12) == 4096);
  CHECK(dense_dimension(4, 6) == 4096);
  CHECK_THROWS_AS(dense_dimension(2, 13), std::invalid_argument);
  CHECK_THROWS_AS(dense_dimension(3, 8), std::invalid_argument);
  CHECK_THROWS_AS(dense_dimension(1, 3), std::invalid_argument);
  CHECK_THROWS_AS(dense_dimension(2, 0), std::invalid_argument);
}

TEST_CASE("embedded trace picks up one factor of d per bystander") {
  std::mt19937 rng(7041);
  for (int d : {2, 3}) {
    for (int n = 1; n <= 3; ++n) {
      const Matrix op = random_matrix(d, rng);
      for (int p = 0; p < n; ++p) {
        const Complex got = embed(op, p, n).matrix.trace();
        const Complex expected = op.trace() * std::pow(static_cast<double>(d), n - 1);
        CHECK(std::abs(got - expected) <= 1e-11);
      }
    }
  }
}

TEST_CASE("embedding is multiplicative on a fixed factor") {
  std::mt19937 rng(7042);
  for (int d : {2, 3}) {
    const Matrix a = random_matrix(d, rng);
    const Matrix b = random_matrix(d, rng);
    for (int n = 2; n <= 3; ++n)
      for (int p = 0; p < n; ++p) {
        const Matrix lhs = embed((a * b).eval(), p, n).matrix;
        const Matrix rhs = embed(a, p, n).matrix * embed(b, p, n).matrix;
        CHECK(max_abs(lhs - rhs) <= 1e-12);
      }
  }
}

TEST_CASE("collective operators for a single particle are the generators") {
  const GeneratorBasis basis = build_basis(3);
  const CollectiveErrorSet set = collective_set(basis, 1);
  REQUIRE(set.operators.size() == basis.generators.size());
  for (std::size_t j = 0; j < basis.generators.size(); ++j)
    CHECK(max_abs(set.operators[j].matrix - basis.generators[j]) == 0.0);
}

TEST_CASE("collective operators are hermitian and traceless") {
  for (int d : {2, 3}) {
    const GeneratorBasis basis = build_basis(d);
    for (int n = 1; n <= 3; ++n) {
      const CollectiveErrorSet set = collective_set(basis, n);
      for (const ManyBodyOperator& s : set.operators) {
        CHECK(max_abs(s.matrix - s.matrix.adjoint()) == 0.0);
        CHECK(std::abs(s.matrix.trace()) <= 1e-12);
      }
    }
  }
}

TEST_CASE("collective operators close under commutation") {
  for (int d = 2; d <= 4; ++d) {
    const GeneratorBasis basis = build_basis(d);
    const StructureTensors tensors = compute_structure_tensors(basis);
    for (int n = 1; n <= 3; ++n) {
      const CollectiveErrorSet set = collective_set(basis, n);
      const int count = set.size();
      double worst = 0.0;
      for (int i = 0; i < count; ++i)
        for (int j = i + 1; j < count; ++j) {
          Matrix rhs = Matrix::Zero(set.operators[0].matrix.rows(),
                                    set.operators[0].matrix.cols());
          for (int k = 0; k < count; ++k) {
            const double f = tensors.f.value(i, j, k);
            if (f != 0.0)
              rhs += Complex(0, 2.0 * f) * set.operators[static_cast<std::size_t>(k)].matrix;
          }
          const Matrix lhs = set.operators[static_cast<std::size_t>(i)].matrix *
                                 set.operators[static_cast<std::size_t>(j)].matrix -
                             set.operators[static_cast<std::size_t>(j)].matrix *
                                 set.operators[static_cast<std::size_t>(i)].matrix;
          worst = std::max(worst, max_abs(lhs - rhs));
        }
      INFO("d=" << d << " n=" << n);
      CHECK(worst <= 1e-10);
    }
  }
}

TEST_CASE("commutator rejects operators on different spaces") {
  const GeneratorBasis basis = build_basis(2);
  const ManyBodyOperator a = embed(basis.generators[0], 0, 2);
  const ManyBodyOperator b = embed(basis.generators[0], 0, 1);
  CHECK_THROWS_AS(commutator(a, b), std::invalid_argument);
}

TEST_CASE("identity commutes with the whole collective set") {
  const GeneratorBasis basis = build_basis(3);
  const CollectiveErrorSet set = collective_set(basis, 2);
  const ManyBodyOperator id{3, 2, Matrix::Identity(9, 9), "I"};
  const CommutationReport report = commutes_with_all(id, set);
  CHECK(report.commutes);
  CHECK(report.max_residual == 0.0);
}

TEST_CASE("single-site operator fails to commute with the collective set") {
  const GeneratorBasis basis = build_basis(2);
  const CollectiveErrorSet set = collective_set(basis, 2);
  const ManyBodyOperator h = embed(basis.generators[2], 0, 2);
  const CommutationReport report = commutes_with_all(h, set);
  CHECK_FALSE(report.commutes);
  CHECK(report.max_residual > 0.1);
}

TEST_CASE("square of one collective operator: outcome depends on d and n") {
  for (int d : {2, 3}) {
    for (int n = 1; n <= 2; ++n) {
      const GeneratorBasis basis = build_basis(d);
      const CollectiveErrorSet set = collective_set(basis, n);
      const Matrix s1 = set.operators[0].matrix;
      const ManyBodyOperator h{d, n, s1 * s1, "S_0^2"};

      double expected = 0.0;
      for (const ManyBodyOperator& s : set.operators)
        expected = std::max(expected, max_abs(h.matrix * s.matrix - s.matrix * h.matrix));

      const CommutationReport report = commutes_with_all(h, set);
      CHECK(report.max_residual == Catch::Approx(expected).margin(1e-14));
      CHECK(report.commutes == (expected <= 1e-10));
      const bool should_commute = (d == 2 && n == 1);
      INFO("d=" << d << " n=" << n << " residual=" << report.max_residual);
      CHECK(report.commutes == should_commute);
    }
  }
}

TEST_CASE("collective unitary with zero coefficients is the identity") {
  const GeneratorBasis basis = build_basis(2);
  const CollectiveErrorSet set = collective_set(basis, 2);
  const ManyBodyOperator u = collective_unitary(set, std::vector<Complex>(3, 0.0));
  CHECK(max_abs(u.matrix - Matrix::Identity(4, 4)) <= 1e-14);
}

TEST_CASE("collective unitary reproduces a closed-form rotation") {
  const GeneratorBasis basis = build_basis(2);
  const CollectiveErrorSet set = collective_set(basis, 1);
  std::vector<Complex> v(3, 0.0);
  v[2] = Complex(0, std::numbers::pi / 2.0);
  const ManyBodyOperator u = collective_unitary(set, v);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 0) = Complex(0, 1);
  expected(1, 1) = Complex(0, -1);
  CHECK(max_abs(u.matrix - expected) <= 1e-13);
}

TEST_CASE("collective unitary rejects wrong coefficient counts") {
  const GeneratorBasis basis = build_basis(2);
  const CollectiveErrorSet set = collective_set(basis, 2);
  CHECK_THROWS_AS(collective_unitary(set, std::vector<Complex>(4, 0.0)), std::invalid_argument);
}

TEST_CASE("collective unitary is unitary for anti-hermitian arguments") {
  std::mt19937 rng(7043);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int d : {2, 3}) {
    const GeneratorBasis basis = build_basis(d);
    const CollectiveErrorSet set = collective_set(basis, 2);
    std::vector<Complex> v(static_cast<std::size_t>(set.size()));
    for (Complex& c : v) c = Complex(0, u(rng));
    const ManyBodyOperator gate = collective_unitary(set, v);
    const Eigen::Index dim = gate.matrix.rows();
    CHECK(max_abs(gate.matrix * gate.matrix.adjoint() - Matrix::Identity(dim, dim)) <= 1e-10);
  }
}

TEST_CASE("general complex coefficients go through the non-normal path") {
  std::mt19937 rng(7044);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  const GeneratorBasis basis = build_basis(2);
  const CollectiveErrorSet set = collective_set(basis, 2);
  std::vector<Complex> v(3), neg(3);
  for (std::size_t j = 0; j < 3; ++j) {
    v[j] = Complex(u(rng), u(rng));
    neg[j] = -v[j];
  }
  const Matrix forward = collective_unitary(set, v).matrix;
  const Matrix backward = collective_unitary(set, neg).matrix;
  CHECK(max_abs(forward * backward - Matrix::Identity(4, 4)) <= 1e-10);
}

TEST_CASE("conjugation by a collective unitary preserves the collective span") {
  std::mt19937 rng(7045);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int d : {2, 3}) {
    const GeneratorBasis basis = build_basis(d);
    const CollectiveErrorSet set = collective_set(basis, 2);
    std::vector<Complex> v(static_cast<std::size_t>(set.size()));
    for (Complex& c : v) c = Complex(0, u(rng));
    const Matrix gate = collective_unitary(set, v).matrix;

    std::vector<Matrix> span;
    for (const ManyBodyOperator& s : set.operators) span.push_back(s.matrix);
    for (const ManyBodyOperator& s : set.operators) {
      const Matrix conjugated = gate * s.matrix * gate.adjoint();
      const SpanFit fit = fit_onto_span(conjugated, span);
      INFO("d=" << d << " op=" << s.label);
      CHECK(fit.residual <= 1e-8);
    }
  }
}
