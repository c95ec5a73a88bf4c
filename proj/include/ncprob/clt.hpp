#ifndef NCPROB_CLT_HPP
#define NCPROB_CLT_HPP

#include <optional>
#include <string>
#include <vector>

#include "ncprob/seqmodel.hpp"
#include "ncprob/subalg.hpp"
#include "ncprob/symcheck.hpp"
#include "ncprob/tuplecomb.hpp"

namespace ncprob {

inline constexpr long long kSnEnumerationCap = 10'000'000;

// psi(S_N(x)^p) with S_N(x) = N^{-1/2} sum_{n<N} iota_n(x), by direct
// enumeration of all N^p index tuples (memoized per order class).
double sn_moment_bruteforce(const RandomSequenceModel& model,
                            const AlgElement& x, int p, int N);

// Same moment through the order-class decomposition: sum over [i] in O(p)
// of the class moment times the number of tuples in the class. Sound only
// for spreadable models; a spreadability verdict may be supplied to skip
// the built-in gate (degree min(p, 4)).
double sn_moment_by_classes(const RandomSequenceModel& model,
                            const AlgElement& x, int p, int N,
                            const SymmetryVerdict* spreadable = nullptr);

struct ClassMomentRow {
  IndexTuple canonical;
  Complex moment;
};

struct CLTLimit {
  int p = 0;
  double a_p = 0.0;      // average class moment over O_2(p)
  double limit = 0.0;    // p!! * a_p, 0 for odd p
  std::vector<ClassMomentRow> classes;
};

// The limit formula p!! * a_p(x) over the pair classes O_2(p). When a tail
// candidate is supplied, x must be centered against it (E(iota_0(x)) = 0);
// otherwise scalar centering psi_0(x) = 0 is required.
CLTLimit clt_limit(const RandomSequenceModel& model, const AlgElement& x,
                   int p, const CondExp* tail = nullptr, double tol = 1e-9,
                   const SymmetryVerdict* spreadable = nullptr);

struct ApResult {
  int p = 0;
  bool auto_centered = false;
  int classes = 0;
  AlgElement value;  // p!! * average of E_N(class monomial) over O_2(p)
};

// Operator-valued conditional limit: the average over O_2(p) of conditional
// expectations of class monomials in z_i = iota_i(x) - E_N(iota_i(x)) (when
// auto_center) scaled by p!!.
ApResult conditional_limit_Ap(const RandomSequenceModel& model,
                              const AlgElement& x, int p, const CondExp& en,
                              bool auto_center = true,
                              const SymmetryVerdict* spreadable = nullptr);

enum class ReferenceLaw { Gaussian, Semicircle, QInterpolation };

// Unit-variance moments: gaussian -> p!!, semicircle -> Catalan C_{p/2},
// q-interpolation -> sum over pair partitions of q^crossings; 0 for odd p.
double reference_moment(ReferenceLaw law, int p, double q = 0.0);

}  // namespace ncprob

#endif
