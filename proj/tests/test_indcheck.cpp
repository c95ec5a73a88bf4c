#include <cmath>
#include <vector>

#include <doctest.h>

#include "ncprob/indcheck.hpp"

using namespace ncprob;

namespace {

RandomSequenceModel iid_m2(int window) {
  const BlockAlgebra m2 = BlockAlgebra::full_matrix(2);
  return iid_tensor_sequence(m2, FaithfulState::normalized_trace(m2), window);
}

RandomSequenceModel coin(int window) {
  return coin_mixture_sequence({{0.3, 0.5}, {0.7, 0.5}}, window);
}

Subalgebra scalars(const RandomSequenceModel& m) {
  return scalar_subalgebra(m.ambient(), m.ambient_state());
}

Subalgebra fiber_scalars(const RandomSequenceModel& m) {
  return generate_subalgebra(m.ambient(), m.ambient_state(),
                             m.tail_candidate_generators());
}

}  // namespace

TEST_CASE("iid chain is C-independent across legs") {
  const auto model = iid_m2(4);
  const auto v = check_factorizability(model, scalars(model), {0}, {1},
                                       /*joined=*/false);
  CHECK(v.pass);
  CHECK(v.max_violation <= 1e-10);
}

TEST_CASE("coin model factorizations") {
  const auto model = coin(4);
  SUBCASE("joined CI over the fiber scalars passes") {
    const auto v = check_factorizability(model, fiber_scalars(model), {0}, {1},
                                         /*joined=*/true);
    CHECK(v.pass);
    CHECK(v.max_violation <= 1e-10);
  }
  SUBCASE("plain C-independence fails with gap 0.04") {
    const auto v = check_factorizability(model, scalars(model), {0}, {1},
                                         /*joined=*/false);
    CHECK(!v.pass);
    CHECK(std::abs(v.max_violation - 0.04) < 1e-10);
    REQUIRE(v.witness.has_value());
    // Every generator pair ties at gap 0.04; the witness records one of them.
    CHECK(std::abs(v.witness->state_lhs - v.witness->state_rhs) -
              0.04 < 1e-10);
    // The e_1 pair carries the canonical 0.29-vs-0.25 values.
    CHECK(std::abs(model.psi_moment(IndexTuple{0, 1}, {1, 1}) -
                   Complex(0.29, 0)) < 1e-10);
    const Complex single = model.psi_moment(IndexTuple{0}, {1});
    CHECK(std::abs(single * single - Complex(0.25, 0)) < 1e-10);
  }
}

TEST_CASE("sequence-level independence sweeps") {
  SUBCASE("perturbed omega = i is full C-factorizable") {
    const auto model = codomain_perturbed_sequence(Complex(0, 1), 4);
    const auto r = check_sequence_independence(model, scalars(model),
                                               IndependenceMode::CF, 2, 4);
    CHECK(r.pass);
    CHECK(r.max_violation <= 1e-10);
    CHECK(!r.pairs.empty());
  }
  SUBCASE("iid passes joined CI over the scalars") {
    const auto model = iid_m2(4);
    const auto r = check_sequence_independence(model, scalars(model),
                                               IndependenceMode::CI, 2, 4);
    CHECK(r.pass);
  }
  SUBCASE("coin: CI passes over fiber scalars, fails over C1") {
    const auto model = coin(4);
    const auto good = check_sequence_independence(
        model, fiber_scalars(model), IndependenceMode::CI, 2, 4);
    CHECK(good.pass);
    const auto bad = check_sequence_independence(model, scalars(model),
                                                 IndependenceMode::CI, 2, 4);
    CHECK(!bad.pass);
  }
}

TEST_CASE("mode monotonicity on shipped models") {
  // pass(CI) => pass(CF), pass(CI) => pass(CIo), pass(CF) => pass(CFo).
  struct Fixture {
    RandomSequenceModel model;
    Subalgebra n;
  };
  std::vector<Fixture> fixtures;
  {
    auto iid = iid_m2(4);
    auto n = scalars(iid);
    fixtures.push_back({std::move(iid), std::move(n)});
  }
  {
    auto c = coin(4);
    auto nf = fiber_scalars(c);
    fixtures.push_back({c, std::move(nf)});
    auto ns = scalars(c);
    fixtures.push_back({std::move(c), std::move(ns)});
  }
  for (const auto& fx : fixtures) {
    const bool ci = check_sequence_independence(fx.model, fx.n,
                                                IndependenceMode::CI, 2, 4)
                        .pass;
    const bool cio = check_sequence_independence(fx.model, fx.n,
                                                 IndependenceMode::CIo, 2, 4)
                         .pass;
    const bool cf = check_sequence_independence(fx.model, fx.n,
                                                IndependenceMode::CF, 2, 4)
                        .pass;
    const bool cfo = check_sequence_independence(fx.model, fx.n,
                                                 IndependenceMode::CFo, 2, 4)
                         .pass;
    CHECK((!ci || cf));
    CHECK((!ci || cio));
    CHECK((!cf || cfo));
  }
}

TEST_CASE("coin model: CF and CI verdicts coincide (commutative case)") {
  const auto model = coin(4);
  for (const Subalgebra& n : {fiber_scalars(model), scalars(model)}) {
    const bool cf = check_sequence_independence(model, n,
                                                IndependenceMode::CF, 2, 4)
                        .pass;
    const bool ci = check_sequence_independence(model, n,
                                                IndependenceMode::CI, 2, 4)
                        .pass;
    CHECK(cf == ci);
  }
}

TEST_CASE("zero-one diagnostic") {
  SUBCASE("iid: trivial tail") {
    const auto r = zero_one_diagnostic(iid_m2(4), 4);
    CHECK(r.applicable);
    CHECK(r.trivial_tail);
    CHECK(r.max_deviation <= 1e-10);
  }
  SUBCASE("perturbed omega = i: trivial tail") {
    const auto model = codomain_perturbed_sequence(Complex(0, 1), 4);
    const auto r = zero_one_diagnostic(model, 4);
    CHECK(r.applicable);
    CHECK(r.trivial_tail);
  }
  SUBCASE("coin: skipped with a reason") {
    const auto r = zero_one_diagnostic(coin(4), 4);
    CHECK(!r.applicable);
    CHECK(!r.reason.empty());
  }
}

TEST_CASE("factorizability vs independence audit") {
  SUBCASE("coin over fiber scalars: all modes coherent") {
    const auto model = coin(4);
    const auto audit = factorizability_vs_independence_audit(
        model, fiber_scalars(model), 2, 4);
    CHECK(audit.stationary_ok);
    CHECK(audit.shift_invariant_ok);
    CHECK(audit.ci.pass);
    CHECK(audit.cio.pass);
    CHECK(audit.cf.pass);
    CHECK(audit.cfo.pass);
    CHECK(audit.cf_implies_ci == "holds");
    CHECK(audit.cfo_implies_cio == "holds");
  }
  SUBCASE("iid over the scalars: all four pass") {
    const auto model = iid_m2(4);
    const auto audit =
        factorizability_vs_independence_audit(model, scalars(model), 2, 4);
    CHECK(audit.ci.pass);
    CHECK(audit.cio.pass);
    CHECK(audit.cf.pass);
    CHECK(audit.cfo.pass);
    CHECK(audit.cf_implies_ci == "holds");
  }
}

TEST_CASE("witness reproducibility and determinism") {
  const auto model = coin(4);
  const auto n = scalars(model);
  const auto a = check_factorizability(model, n, {0}, {1}, false);
  const auto b = check_factorizability(model, n, {0}, {1}, false);
  REQUIRE(a.witness.has_value());
  REQUIRE(b.witness.has_value());
  CHECK(a.witness->x_recipe == b.witness->x_recipe);
  CHECK(a.witness->y_recipe == b.witness->y_recipe);
  CHECK(a.max_violation == b.max_violation);
  CHECK(std::abs(a.witness->violation - a.max_violation) < 1e-12);
}

TEST_CASE("mode helpers") {
  CHECK(to_string(IndependenceMode::CI) == "CI");
  CHECK(to_string(IndependenceMode::CFo) == "CFo");
  CHECK(is_joined_mode(IndependenceMode::CI));
  CHECK(is_joined_mode(IndependenceMode::CIo));
  CHECK(!is_joined_mode(IndependenceMode::CF));
  CHECK(is_order_mode(IndependenceMode::CIo));
  CHECK(is_order_mode(IndependenceMode::CFo));
  CHECK(!is_order_mode(IndependenceMode::CI));
}

TEST_CASE("invalid conditioning is surfaced") {
  const BlockAlgebra m2 = BlockAlgebra::full_matrix(2);
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 2.0 / 3.0;
  rho(1, 1) = 1.0 / 3.0;
  const FaithfulState skew(m2, {1.0}, {rho});
  // A subalgebra that is not modularly invariant yields an invalid
  // conditional expectation, which the factorizability entry points refuse.
  const auto sx = generate_subalgebra(m2, skew, {pauli_x()});
  const CondExp bad = conditional_expectation(m2, skew, sx);
  CHECK(!bad.valid());
  const BlockAlgebra c2 = BlockAlgebra::commutative(2);
  const auto tiny = iid_tensor_sequence(c2, FaithfulState::trace_p(0.5), 2);
  CHECK_THROWS_AS(check_factorizability(tiny, bad, {0}, {1}, false),
                  Error);
}
