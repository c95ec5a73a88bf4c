#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "ncprob/seqmodel.hpp"
#include "ncprob/subalg.hpp"

using namespace ncprob;

namespace {

std::mt19937_64 rng(4242);

AlgElement random_element(const BlockAlgebra& a) {
  std::normal_distribution<double> dist(0.0, 1.0);
  AlgElement x = AlgElement::zero(a);
  for (int b = 0; b < a.num_blocks(); ++b) {
    Matrix& m = x.block(b);
    for (int r = 0; r < m.rows(); ++r) {
      for (int c = 0; c < m.cols(); ++c) {
        m(r, c) = Complex(dist(rng), dist(rng));
      }
    }
  }
  return x;
}

// The three M_4 commuting-square configurations used across the suite.
struct SquareFixture {
  BlockAlgebra m4 = BlockAlgebra::full_matrix(4);
  FaithfulState tr4 = FaithfulState::normalized_trace(m4);

  AlgElement embed_left(const Matrix& m) const {
    AlgElement e = AlgElement::zero(m4);
    e.block(0) = kron(m, Matrix::Identity(2, 2));
    return e;
  }
  AlgElement embed_right(const Matrix& m) const {
    AlgElement e = AlgElement::zero(m4);
    e.block(0) = kron(Matrix::Identity(2, 2), m);
    return e;
  }
  std::vector<AlgElement> left_units() const {
    std::vector<AlgElement> out;
    for (const AlgElement& u :
         matrix_unit_basis(BlockAlgebra::full_matrix(2))) {
      out.push_back(embed_left(u.block(0)));
    }
    return out;
  }
  std::vector<AlgElement> right_units() const {
    std::vector<AlgElement> out;
    for (const AlgElement& u :
         matrix_unit_basis(BlockAlgebra::full_matrix(2))) {
      out.push_back(embed_right(u.block(0)));
    }
    return out;
  }
};

}  // namespace

TEST_CASE("generated subalgebra dimensions") {
  const BlockAlgebra m2 = BlockAlgebra::full_matrix(2);
  const FaithfulState tr = FaithfulState::normalized_trace(m2);
  CHECK(generate_subalgebra(m2, tr, {AlgElement::identity(m2)}).dim() == 1);
  const auto span_sx = generate_subalgebra(m2, tr, {pauli_x()});
  CHECK(span_sx.dim() == 2);
  CHECK(span_sx.contains_identity);
  CHECK(span_sx.span_distance(pauli_x()) < 1e-10);
  CHECK(span_sx.span_distance(pauli_z()) > 0.5);
  const AlgElement e12 = AlgElement::matrix_unit(m2, 0, 0, 1);
  CHECK(generate_subalgebra(m2, tr, {e12}).dim() == 4);
}

TEST_CASE("modular invariance") {
  const BlockAlgebra m2 = BlockAlgebra::full_matrix(2);
  const FaithfulState tr = FaithfulState::normalized_trace(m2);
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 2.0 / 3.0;
  rho(1, 1) = 1.0 / 3.0;
  const FaithfulState skew(m2, {1.0}, {rho});

  const AlgElement e11 = AlgElement::matrix_unit(m2, 0, 0, 0);
  SUBCASE("tracial state: always invariant") {
    const auto diag = generate_subalgebra(m2, tr, {e11});
    CHECK(check_modular_invariance(tr, diag));
  }
  SUBCASE("diagonal subalgebra under diagonal density: invariant") {
    const auto diag = generate_subalgebra(m2, skew, {e11});
    CHECK(check_modular_invariance(skew, diag));
  }
  SUBCASE("span{1, sigma_x} under diagonal density: not invariant") {
    const auto sx = generate_subalgebra(m2, skew, {pauli_x()});
    CHECK(!check_modular_invariance(skew, sx));
    const CondExp e = conditional_expectation(m2, skew, sx);
    CHECK(e.validity() == CondExpValidity::NotModularlyInvariant);
    CHECK(!e.valid());
  }
}

TEST_CASE("conditional expectation closed forms") {
  const BlockAlgebra m2 = BlockAlgebra::full_matrix(2);
  const FaithfulState tr = FaithfulState::normalized_trace(m2);
  SUBCASE("onto the scalars: E(x) = psi(x) 1") {
    const auto n = scalar_subalgebra(m2, tr);
    const CondExp e = conditional_expectation(m2, tr, n);
    REQUIRE(e.valid());
    for (int rep = 0; rep < 10; ++rep) {
      const AlgElement x = random_element(m2);
      const AlgElement diff =
          e.apply(x) - state_eval(tr, x) * AlgElement::identity(m2);
      CHECK(diff.max_abs() < 1e-10);
    }
  }
  SUBCASE("onto the diagonal: E keeps the diagonal entries") {
    const AlgElement e11 = AlgElement::matrix_unit(m2, 0, 0, 0);
    const auto diag = generate_subalgebra(m2, tr, {e11});
    const CondExp e = conditional_expectation(m2, tr, diag);
    REQUIRE(e.valid());
    const AlgElement x = random_element(m2);
    const AlgElement px = e.apply(x);
    CHECK(std::abs(px.block(0)(0, 0) - x.block(0)(0, 0)) < 1e-10);
    CHECK(std::abs(px.block(0)(1, 1) - x.block(0)(1, 1)) < 1e-10);
    CHECK(std::abs(px.block(0)(0, 1)) < 1e-10);
    CHECK(std::abs(px.block(0)(1, 0)) < 1e-10);
  }
}

TEST_CASE("conditional expectation laws on random samples") {
  const BlockAlgebra m4 = BlockAlgebra::full_matrix(4);
  const FaithfulState tr = FaithfulState::normalized_trace(m4);
  const SquareFixture fx;
  const auto target = generate_subalgebra(m4, tr, fx.left_units());
  const CondExp e = conditional_expectation(m4, tr, target);
  REQUIRE(e.valid());
  for (int rep = 0; rep < 30; ++rep) {
    const AlgElement x = random_element(m4);
    // Idempotence
    CHECK((e.apply(e.apply(x)) - e.apply(x)).max_abs() < 1e-9);
    // psi-preservation
    CHECK(std::abs(state_eval(tr, e.apply(x)) - state_eval(tr, x)) < 1e-9);
    // GNS contractivity
    CHECK(gns_norm(tr, e.apply(x)) <= gns_norm(tr, x) + 1e-9);
    // Bimodule property over target basis elements
    const AlgElement& a = target.basis[static_cast<std::size_t>(rep) %
                                       target.basis.size()];
    const AlgElement lhs = e.apply(a * x * a.adjoint());
    const AlgElement rhs = a * e.apply(x) * a.adjoint();
    CHECK((lhs - rhs).max_abs() < 1e-8);
  }
  // Positivity spot check: E(x*x) has nonnegative minimum eigenvalue.
  const AlgElement x = random_element(m4);
  const AlgElement pos = e.apply(x.adjoint() * x);
  Eigen::SelfAdjointEigenSolver<Matrix> es(pos.block(0));
  CHECK(es.eigenvalues().minCoeff() > -1e-8);
}

TEST_CASE("uniqueness: two valid expectations onto the same span agree") {
  const BlockAlgebra m2 = BlockAlgebra::full_matrix(2);
  const FaithfulState tr = FaithfulState::normalized_trace(m2);
  const auto a = generate_subalgebra(m2, tr, {pauli_x()});
  const auto b = generate_subalgebra(
      m2, tr, {2.0 * pauli_x(), AlgElement::identity(m2)});
  const CondExp ea = conditional_expectation(m2, tr, a);
  const CondExp eb = conditional_expectation(m2, tr, b);
  REQUIRE(ea.valid());
  REQUIRE(eb.valid());
  for (const AlgElement& u : matrix_unit_basis(m2)) {
    CHECK((ea.apply(u) - eb.apply(u)).max_abs() < 1e-8);
  }
}

TEST_CASE("GNS frame coordinates reproduce the GNS norm") {
  const BlockAlgebra a({2, 2});
  const FaithfulState st = FaithfulState::normalized_trace(a);
  const GnsFrame frame(st);
  for (int rep = 0; rep < 10; ++rep) {
    const AlgElement x = random_element(a);
    CHECK(std::abs(frame.coords(x).norm() - gns_norm(st, x)) < 1e-10);
  }
}

TEST_CASE("commuting squares on M_4") {
  const SquareFixture fx;
  const auto m0 = scalar_subalgebra(fx.m4, fx.tr4);
  const CondExp e0 = conditional_expectation(fx.m4, fx.tr4, m0);

  SUBCASE("tensor factors: all four conditions hold") {
    const CondExp e1 = conditional_expectation(
        fx.m4, fx.tr4, generate_subalgebra(fx.m4, fx.tr4, fx.left_units()));
    const CondExp e2 = conditional_expectation(
        fx.m4, fx.tr4, generate_subalgebra(fx.m4, fx.tr4, fx.right_units()));
    const auto r = verify_commuting_square(e1, e2, e0);
    CHECK(r.all_hold());
    CHECK(r.all_agree);
  }
  SUBCASE("U_omega conjugate of the left factor: all four hold") {
    const AlgElement u = perturbation_unitary(Complex(-1, 0));
    std::vector<AlgElement> conj;
    for (const auto& g : fx.left_units()) conj.push_back(u * g * u.adjoint());
    const CondExp e1 = conditional_expectation(
        fx.m4, fx.tr4, generate_subalgebra(fx.m4, fx.tr4, fx.left_units()));
    const CondExp e2 = conditional_expectation(
        fx.m4, fx.tr4, generate_subalgebra(fx.m4, fx.tr4, conj));
    const auto r = verify_commuting_square(e1, e2, e0);
    CHECK(r.all_hold());
    CHECK(r.all_agree);
  }
  SUBCASE("degenerate diagonal pair: all four fail together") {
    Matrix d(2, 2);
    d << 1, 0, 0, 0;
    const auto diag =
        generate_subalgebra(fx.m4, fx.tr4, {fx.embed_left(d)});
    const CondExp e1 = conditional_expectation(fx.m4, fx.tr4, diag);
    const CondExp e2 = conditional_expectation(fx.m4, fx.tr4, diag);
    const auto r = verify_commuting_square(e1, e2, e0);
    CHECK(!r.independence);
    CHECK(!r.range_condition);
    CHECK(!r.composition);
    CHECK(!r.commutation);
    CHECK(r.all_agree);
  }
}

TEST_CASE("subalgebra basis is orthonormal and closed") {
  const BlockAlgebra m2 = BlockAlgebra::full_matrix(2);
  const FaithfulState tr = FaithfulState::normalized_trace(m2);
  const AlgElement e12 = AlgElement::matrix_unit(m2, 0, 0, 1);
  const auto sub = generate_subalgebra(m2, tr, {pauli_x(), e12});
  for (int i = 0; i < sub.dim(); ++i) {
    for (int j = 0; j < sub.dim(); ++j) {
      const Complex g = gns_inner(tr, sub.basis[static_cast<std::size_t>(i)],
                                  sub.basis[static_cast<std::size_t>(j)]);
      CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) < 1e-9);
    }
  }
  for (const auto& x : sub.basis) {
    CHECK(sub.span_distance(x.adjoint()) < 1e-8);
    for (const auto& y : sub.basis) {
      CHECK(sub.span_distance(x * y) < 1e-8);
    }
  }
}
