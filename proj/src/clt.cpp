#include "ncprob/clt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace ncprob {

namespace {

Complex monomial_moment(const RandomSequenceModel& model, const AlgElement& x,
                        const IndexTuple& tuple) {
  const std::vector<AlgElement> factors(static_cast<std::size_t>(tuple.size()),
                                        x);
  return model.moment(tuple, factors);
}

// Moment with memoization keyed by the model's moment key (exact for
// leg-local models, plain tuple otherwise).
Complex cached_moment(const RandomSequenceModel& model, const AlgElement& x,
                      const IndexTuple& tuple,
                      std::map<std::vector<int>, Complex>& cache) {
  const IndexTuple key = model.moment_key(tuple);
  auto it = cache.find(key.entries);
  if (it != cache.end()) return it->second;
  const Complex v = monomial_moment(model, x, tuple);
  cache.emplace(key.entries, v);
  return v;
}

void require_spreadable(const RandomSequenceModel& model, int p,
                        const SymmetryVerdict* supplied, const char* who) {
  if (supplied != nullptr) {
    if (supplied->kind != SymmetryKind::Spreadable || !supplied->pass) {
      throw PreconditionError(std::string(who) +
                              ": supplied verdict is not a passing "
                              "spreadability verdict");
    }
    return;
  }
  const int degree = std::min(p, 4);
  const int window = std::min(model.window(), degree + 1);
  const auto v =
      check_symmetry(model, SymmetryKind::Spreadable, degree, window, 1e-9);
  if (!v.pass) {
    throw PreconditionError(std::string(who) +
                            ": model is not spreadable at degree " +
                            std::to_string(degree) + " (violation " +
                            std::to_string(v.max_violation) + ")");
  }
}

}  // namespace

double sn_moment_bruteforce(const RandomSequenceModel& model,
                            const AlgElement& x, int p, int N) {
  require_same_algebra(x.algebra(), model.base(), "sn_moment_bruteforce");
  if (p < 1) throw ValidationError("sn_moment_bruteforce: p must be >= 1");
  if (N < 1 || N > model.window()) {
    throw WindowError("sn_moment_bruteforce: N must lie in [1, window]");
  }
  double total = 1.0;
  for (int k = 0; k < p; ++k) {
    total *= static_cast<double>(N);
    if (total > static_cast<double>(kSnEnumerationCap)) {
      throw ResourceError(
          "sn_moment_bruteforce: N^p exceeds the enumeration cap; use "
          "sn_moment_by_classes");
    }
  }
  std::map<std::vector<int>, Complex> cache;
  Complex sum(0.0);
  std::vector<int> entries(static_cast<std::size_t>(p), 0);
  for (;;) {
    sum += cached_moment(model, x, IndexTuple{entries}, cache);
    std::size_t i = entries.size();
    while (i-- > 0) {
      if (++entries[i] < N) break;
      entries[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return sum.real() / std::pow(static_cast<double>(N), p / 2.0);
}

double sn_moment_by_classes(const RandomSequenceModel& model,
                            const AlgElement& x, int p, int N,
                            const SymmetryVerdict* spreadable) {
  require_same_algebra(x.algebra(), model.base(), "sn_moment_by_classes");
  if (p < 1) throw ValidationError("sn_moment_by_classes: p must be >= 1");
  if (N < 1) throw ValidationError("sn_moment_by_classes: N must be >= 1");
  if (model.window() < p) {
    throw WindowError("sn_moment_by_classes: window must be >= p");
  }
  require_spreadable(model, p, spreadable, "sn_moment_by_classes");
  Complex sum(0.0);
  for (const OrderClass& cls : enumerate_order_classes(p)) {
    const long long count = count_tuples_in_class(cls, N);
    if (count == 0) continue;
    sum += static_cast<double>(count) *
           monomial_moment(model, x, cls.canonical);
  }
  return sum.real() / std::pow(static_cast<double>(N), p / 2.0);
}

CLTLimit clt_limit(const RandomSequenceModel& model, const AlgElement& x,
                   int p, const CondExp* tail, double tol,
                   const SymmetryVerdict* spreadable) {
  require_same_algebra(x.algebra(), model.base(), "clt_limit");
  if (p < 1) throw ValidationError("clt_limit: p must be >= 1");
  if (model.window() < std::max(1, p / 2)) {
    throw WindowError("clt_limit: window must be >= p/2");
  }
  require_spreadable(model, p, spreadable, "clt_limit");

  // Centering: against the tail candidate when supplied, scalar otherwise.
  if (tail != nullptr) {
    const AlgElement ex = tail->apply(model.embedding(0).apply(x));
    const double dev = gns_norm(model.ambient_state(), ex);
    if (dev > tol) {
      throw PreconditionError(
          "clt_limit: x is not centered against the tail candidate, "
          "|E(x)| = " + std::to_string(dev));
    }
  } else {
    const double dev = std::abs(state_eval(model.base_state(), x));
    if (dev > tol) {
      throw PreconditionError("clt_limit: psi_0(x) = " + std::to_string(dev) +
                              " is not zero");
    }
  }

  CLTLimit out;
  out.p = p;
  if (p % 2 != 0) return out;
  Complex sum(0.0);
  const auto classes = enumerate_pair_classes(p);
  for (const OrderClass& cls : classes) {
    const Complex m = monomial_moment(model, x, cls.canonical);
    sum += m;
    out.classes.push_back({cls.canonical, m});
  }
  out.a_p = (sum / static_cast<double>(classes.size())).real();
  out.limit = static_cast<double>(odd_double_factorial(p)) * out.a_p;
  return out;
}

ApResult conditional_limit_Ap(const RandomSequenceModel& model,
                              const AlgElement& x, int p, const CondExp& en,
                              bool auto_center,
                              const SymmetryVerdict* spreadable) {
  require_same_algebra(x.algebra(), model.base(), "conditional_limit_Ap");
  if (p < 1) throw ValidationError("conditional_limit_Ap: p must be >= 1");
  if (!en.valid()) {
    throw PreconditionError(
        "conditional_limit_Ap: conditional expectation is not valid");
  }
  const int legs = std::max(1, p / 2);
  if (model.materialized_window() < legs) {
    throw WindowError("conditional_limit_Ap: needs materialized window >= " +
                      std::to_string(legs));
  }
  require_spreadable(model, p, spreadable, "conditional_limit_Ap");

  ApResult out{p, auto_center, 0, AlgElement::zero(model.ambient())};
  if (p % 2 != 0) return out;

  // z_i = iota_i(x) - E_N(iota_i(x)); without auto-centering the caller
  // warrants that the embedded factors are already centered.
  std::vector<AlgElement> z;
  for (int i = 0; i < legs; ++i) {
    AlgElement zi = model.embedding(i).apply(x);
    if (auto_center) zi -= en.apply(zi);
    z.push_back(std::move(zi));
  }

  const auto classes = enumerate_pair_classes(p);
  AlgElement sum = AlgElement::zero(model.ambient());
  for (const OrderClass& cls : classes) {
    AlgElement prod = z[static_cast<std::size_t>(cls.canonical[0])];
    for (int k = 1; k < cls.canonical.size(); ++k) {
      prod = prod * z[static_cast<std::size_t>(cls.canonical[k])];
    }
    sum += en.apply(prod);
  }
  out.classes = static_cast<int>(classes.size());
  out.value = (static_cast<double>(odd_double_factorial(p)) /
               static_cast<double>(classes.size())) *
              sum;
  return out;
}

double reference_moment(ReferenceLaw law, int p, double q) {
  if (p < 0) throw ValidationError("reference_moment: p must be >= 0");
  if (p % 2 != 0) return 0.0;
  switch (law) {
    case ReferenceLaw::Gaussian:
      return static_cast<double>(odd_double_factorial(p));
    case ReferenceLaw::Semicircle:
      return static_cast<double>(catalan(p / 2));
    case ReferenceLaw::QInterpolation: {
      if (q < 0.0 || q > 1.0) {
        throw ValidationError("reference_moment: q must lie in [0, 1]");
      }
      double sum = 0.0;
      for (const PairPartition& pi : enumerate_pair_partitions(p)) {
        sum += std::pow(q, crossing_number(pi));
      }
      return sum;
    }
  }
  throw InternalError("reference_moment: unknown law");
}

}  // namespace ncprob
