#ifndef NCPROB_ERGODIC_HPP
#define NCPROB_ERGODIC_HPP

#include <string>
#include <vector>

#include "ncprob/seqmodel.hpp"
#include "ncprob/subalg.hpp"

namespace ncprob {

// A moment-level monomial iota_{i(1)}(h_{b(1)}) ... iota_{i(n)}(h_{b(n)})
// with factors drawn from the base hermitian basis.
struct MonomialSpec {
  IndexTuple tuple;
  std::vector<int> basis_choice;

  void validate() const;
  int size() const { return tuple.size(); }
  // The adjoint monomial: reversed order (hermitian factors are their own
  // adjoints).
  MonomialSpec adjoint() const;
  // Same factors on indices shifted by k.
  MonomialSpec shifted(int k) const;
  std::string label() const;
};

// psi(iota[y] * iota[x + k]); requires shift semantics on the model.
Complex shifted_moment(const RandomSequenceModel& model, const MonomialSpec& y,
                       const MonomialSpec& x, int k);

// (1/n) sum_{k=0}^{n-1} shifted_moment(model, y, x, k), pairwise-summed.
Complex cesaro_average(const RandomSequenceModel& model, const MonomialSpec& y,
                       const MonomialSpec& x, int n);

// |psi(y* shift_k(x)) - psi(y* E_N(x))|: the distance of the k-shifted
// moment from its conditional-expectation target. Pure evaluation; the
// caller decides what counts as mixing.
double mixing_gap(const RandomSequenceModel& model, const MonomialSpec& x,
                  const MonomialSpec& y, const Subalgebra& N_candidate, int k);

// Overload reusing an already-validated conditional expectation, for sweeps
// over many shifts k.
double mixing_gap(const RandomSequenceModel& model, const MonomialSpec& x,
                  const MonomialSpec& y, const CondExp& en, int k);

inline constexpr int kExactTNCap = 4;
inline constexpr int kTNMonteCarloSamples = 2000;
inline constexpr std::uint64_t kTNSeed = 0x5EED;

// Window needed so every theta_{N,l} image of an entry <= max_entry stays
// inside: max image is max_entry + N^2 + N - 1.
int tn_required_window(int max_entry, int N);

struct TNEntry {
  std::string y_label;
  Complex value;
  double std_error = 0.0;  // zero in exact mode
};

struct TNResult {
  int N = 0;
  bool exact = true;
  int samples = 0;  // number of k-vector composites averaged
  std::vector<TNEntry> entries;
};

// Moment-level action of the refined averaging operator T_N on x: for each
// test monomial y (the empty monomial and each single-factor monomial at
// index 0), the average over k in {0,...,N-1}^{N+1} of
// psi(y * iota[theta_{N,k} o i_x; a_x]). Exact enumeration up to
// kExactTNCap, seeded Monte Carlo beyond.
TNResult refined_average_TN(const RandomSequenceModel& model,
                            const MonomialSpec& x, int N);

struct EndomorphismVerdict {
  bool applicable = false;
  std::string reason;
  bool pass = false;
  double max_violation = 0.0;
  int samples = 0;
};

// Moment-level well-definedness of alpha_N: |psi(iota[i;a]* iota[j;b]) -
// psi(iota[theta_N o i;a]* iota[theta_N o j;b])| over a seeded sample of
// concatenated tuples; gated on the model's spreadability verdict.
EndomorphismVerdict induced_endomorphism_check(const RandomSequenceModel& model,
                                               int N, int degree, int window,
                                               double tol = 1e-9);

}  // namespace ncprob

#endif
