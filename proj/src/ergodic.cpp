#include "ncprob/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "ncprob/symcheck.hpp"

namespace ncprob {

void MonomialSpec::validate() const {
  if (static_cast<std::size_t>(tuple.size()) != basis_choice.size()) {
    throw ValidationError("MonomialSpec: tuple and basis choice length mismatch");
  }
}

MonomialSpec MonomialSpec::adjoint() const {
  MonomialSpec out = *this;
  std::reverse(out.tuple.entries.begin(), out.tuple.entries.end());
  std::reverse(out.basis_choice.begin(), out.basis_choice.end());
  return out;
}

MonomialSpec MonomialSpec::shifted(int k) const {
  MonomialSpec out = *this;
  for (int& e : out.tuple.entries) e += k;
  return out;
}

std::string MonomialSpec::label() const {
  if (tuple.size() == 0) return "1";
  std::string s;
  for (int k = 0; k < tuple.size(); ++k) {
    if (!s.empty()) s += " ";
    s += "i" + std::to_string(tuple[k]) + "(h" +
         std::to_string(basis_choice[static_cast<std::size_t>(k)]) + ")";
  }
  return s;
}

namespace {

MonomialSpec concat(const MonomialSpec& a, const MonomialSpec& b) {
  MonomialSpec out = a;
  out.tuple.entries.insert(out.tuple.entries.end(), b.tuple.entries.begin(),
                           b.tuple.entries.end());
  out.basis_choice.insert(out.basis_choice.end(), b.basis_choice.begin(),
                          b.basis_choice.end());
  return out;
}

Complex eval(const RandomSequenceModel& model, const MonomialSpec& m) {
  return model.psi_moment(m.tuple, m.basis_choice);
}

// Pairwise (cascade) summation: reduction order independent of how the
// terms were produced, stable for long averages.
Complex pairwise_sum(std::vector<Complex>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

Complex pairwise_mean(std::vector<Complex> v) {
  if (v.empty()) return Complex(0.0);
  return pairwise_sum(v, 0, v.size()) / static_cast<double>(v.size());
}

// The materialized ambient element of a monomial.
AlgElement realize(const RandomSequenceModel& model, const MonomialSpec& m) {
  AlgElement prod = AlgElement::identity(model.ambient());
  const auto& herm = model.domain_hermitian_basis();
  for (int k = 0; k < m.tuple.size(); ++k) {
    prod = prod * model.embedding(m.tuple[k]).apply(
                      herm[static_cast<std::size_t>(m.basis_choice[k])]);
  }
  return prod;
}

}  // namespace

Complex shifted_moment(const RandomSequenceModel& model, const MonomialSpec& y,
                       const MonomialSpec& x, int k) {
  y.validate();
  x.validate();
  if (k < 0) throw ValidationError("shifted_moment: shift must be >= 0");
  if (!model.shift_semantics()) {
    throw PreconditionError(
        "shifted_moment: model does not carry shift semantics");
  }
  return eval(model, concat(y, x.shifted(k)));
}

Complex cesaro_average(const RandomSequenceModel& model, const MonomialSpec& y,
                       const MonomialSpec& x, int n) {
  if (n < 1) throw ValidationError("cesaro_average: n must be >= 1");
  std::vector<Complex> terms;
  terms.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    terms.push_back(shifted_moment(model, y, x, k));
  }
  return pairwise_mean(std::move(terms));
}

double mixing_gap(const RandomSequenceModel& model, const MonomialSpec& x,
                  const MonomialSpec& y, const Subalgebra& N_candidate, int k) {
  const CondExp en = conditional_expectation(
      model.ambient(), model.ambient_state(), N_candidate);
  return mixing_gap(model, x, y, en, k);
}

double mixing_gap(const RandomSequenceModel& model, const MonomialSpec& x,
                  const MonomialSpec& y, const CondExp& en, int k) {
  x.validate();
  y.validate();
  if (!en.valid()) {
    throw PreconditionError(
        "mixing_gap: conditional expectation onto the candidate is not valid");
  }
  const MonomialSpec yadj = y.adjoint();
  const Complex shifted = eval(model, concat(yadj, x.shifted(k)));
  const AlgElement target =
      realize(model, yadj) * en.apply(realize(model, x));
  return std::abs(shifted - state_eval(model.ambient_state(), target));
}

int tn_required_window(int max_entry, int N) {
  return std::max(max_entry, 0) + N * N + N;  // max image index + 1
}

TNResult refined_average_TN(const RandomSequenceModel& model,
                            const MonomialSpec& x, int N) {
  x.validate();
  if (N < 1) throw ValidationError("refined_average_TN: N must be >= 1");
  if (!model.shift_semantics()) {
    throw PreconditionError(
        "refined_average_TN: model does not carry shift semantics");
  }
  const int needed = tn_required_window(x.tuple.max_entry(), N);
  if (needed > model.window()) {
    throw WindowError("refined_average_TN: needs window >= " +
                      std::to_string(needed) + ", model window is " +
                      std::to_string(model.window()));
  }

  // Test monomials: the empty monomial and every single basis factor at 0.
  std::vector<MonomialSpec> tests;
  tests.push_back({});
  const int nbasis = static_cast<int>(model.domain_hermitian_basis().size());
  for (int h = 0; h < nbasis; ++h) {
    tests.push_back({IndexTuple{{0}}, {h}});
  }

  // All k-vectors in exact mode, a seeded uniform sample beyond the cap.
  std::vector<std::vector<int>> kvecs;
  if (N <= kExactTNCap) {
    std::vector<int> kv(static_cast<std::size_t>(N) + 1, 0);
    for (;;) {
      kvecs.push_back(kv);
      std::size_t i = kv.size();
      while (i-- > 0) {
        if (++kv[i] < N) break;
        kv[i] = 0;
      }
      if (i == static_cast<std::size_t>(-1)) break;
    }
  } else {
    std::mt19937_64 rng(kTNSeed);
    std::uniform_int_distribution<int> pick(0, N - 1);
    for (int s = 0; s < kTNMonteCarloSamples; ++s) {
      std::vector<int> kv(static_cast<std::size_t>(N) + 1);
      for (int& e : kv) e = pick(rng);
      kvecs.push_back(std::move(kv));
    }
  }

  TNResult result;
  result.N = N;
  result.exact = N <= kExactTNCap;
  result.samples = static_cast<int>(kvecs.size());
  for (const MonomialSpec& y : tests) {
    std::vector<Complex> terms;
    terms.reserve(kvecs.size());
    for (const auto& kv : kvecs) {
      MonomialSpec moved = x;
      moved.tuple = theta_composite(N, kv, x.tuple);
      terms.push_back(eval(model, concat(y, moved)));
    }
    const Complex mean = pairwise_mean(terms);
    double se = 0.0;
    if (!result.exact) {
      double var = 0.0;
      for (const Complex& t : terms) var += std::norm(t - mean);
      var /= static_cast<double>(terms.size() - 1);
      se = std::sqrt(var / static_cast<double>(terms.size()));
    }
    result.entries.push_back({y.label(), mean, se});
  }
  return result;
}

EndomorphismVerdict induced_endomorphism_check(const RandomSequenceModel& model,
                                               int N, int degree, int window,
                                               double tol) {
  if (N < 0) throw ValidationError("induced_endomorphism_check: N must be >= 0");
  EndomorphismVerdict verdict;
  const auto spread = check_symmetry(model, SymmetryKind::Spreadable, degree,
                                     std::min(window, model.window()),
                                     std::max(tol, 1e-9));
  if (!spread.pass) {
    verdict.applicable = false;
    verdict.reason = "model is not spreadable at degree " +
                     std::to_string(degree) + " (violation " +
                     std::to_string(spread.max_violation) + ")";
    return verdict;
  }
  verdict.applicable = true;

  // theta_N adds one to entries >= N, so images must stay inside the model
  // window.
  if (window + 1 > model.window()) {
    throw WindowError("induced_endomorphism_check: needs model window >= " +
                      std::to_string(window + 1));
  }

  // Seeded sample of concatenated tuples r = (reverse(i), j): the isometry
  // identity compares psi on r with psi on theta_N o r.
  const int nbasis = static_cast<int>(model.domain_hermitian_basis().size());
  std::mt19937_64 rng(kTNSeed);
  std::uniform_int_distribution<int> pick_idx(0, window - 1);
  std::uniform_int_distribution<int> pick_h(0, nbasis - 1);
  const int per_length = 200;
  for (int len = 1; len <= 2 * degree; ++len) {
    for (int s = 0; s < per_length; ++s) {
      std::vector<int> tuple(static_cast<std::size_t>(len));
      std::vector<int> basis(static_cast<std::size_t>(len));
      for (int k = 0; k < len; ++k) {
        tuple[static_cast<std::size_t>(k)] = pick_idx(rng);
        basis[static_cast<std::size_t>(k)] = pick_h(rng);
      }
      const IndexTuple t{tuple};
      const IndexTuple shifted = apply_partial_shift(N, t);
      const double dev = std::abs(model.psi_moment(t, basis) -
                                  model.psi_moment(shifted, basis));
      verdict.max_violation = std::max(verdict.max_violation, dev);
      ++verdict.samples;
    }
  }
  verdict.pass = verdict.max_violation <= tol;
  return verdict;
}

}  // namespace ncprob
