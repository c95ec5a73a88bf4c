#ifndef NCPROB_TUPLECOMB_HPP
#define NCPROB_TUPLECOMB_HPP

#include <compare>
#include <cstdint>
#include <vector>

#include "ncprob/errors.hpp"

namespace ncprob {

// A map [n] -> N_0 written as the list of its values.
struct IndexTuple {
  std::vector<int> entries;

  IndexTuple() = default;
  IndexTuple(std::initializer_list<int> v) : entries(v) { validate(); }
  explicit IndexTuple(std::vector<int> v) : entries(std::move(v)) { validate(); }

  int size() const { return static_cast<int>(entries.size()); }
  int operator[](int i) const { return entries[static_cast<std::size_t>(i)]; }
  int max_entry() const;  // -1 for the empty tuple

  auto operator<=>(const IndexTuple&) const = default;

 private:
  void validate() const;
};

enum class TupleRelation { Translation, Order, Symmetric };

// Canonical form: Translation subtracts the minimum entry; Order replaces
// entries by the 0-based rank of their value; Symmetric relabels the kernel
// partition in first-occurrence order (restricted growth form).
IndexTuple canon(TupleRelation rel, const IndexTuple& t);

bool are_equivalent(TupleRelation rel, const IndexTuple& s, const IndexTuple& t);

// theta_N(n) = n for n < N, n + 1 for n >= N.
int partial_shift(int N, int n);
IndexTuple apply_partial_shift(int N, const IndexTuple& t);

// theta_{N, l} = theta_0^{l_0} theta_1^{N + l_1} ... theta_N^{N^2 + l_N},
// the rightmost factor applied first; lvec must have N + 1 entries in
// [0, N - 1].
int theta_composite(int N, const std::vector<int>& lvec, int n);
IndexTuple theta_composite(int N, const std::vector<int>& lvec,
                           const IndexTuple& t);

struct OrderClass {
  IndexTuple canonical;
  int distinct_values = 0;
};

// A pair partition of {1, ..., p}, blocks stored as (min, max) and ordered
// by their minima.
struct PairPartition {
  std::vector<std::pair<int, int>> pairs;
};

inline constexpr int kOrderClassCap = 10;
inline constexpr int kPairPartitionCap = 12;

// All order classes of p-tuples as surjective canonical tuples onto
// {0, ..., k-1}, k = 1..p, in lexicographic order of the canonical form.
std::vector<OrderClass> enumerate_order_classes(int p);
// The subset O_2(p): classes whose value fibers all have size 2.
std::vector<OrderClass> enumerate_pair_classes(int p);
std::vector<PairPartition> enumerate_pair_partitions(int p);

int crossing_number(const PairPartition& pi);

// Number of tuples [p] -> {0, ..., N-1} in the class: binomial(N, k).
long long count_tuples_in_class(const OrderClass& cls, int N);

long long binomial(int n, int k);
// p!! in the convention used throughout: (p-1)(p-3)...3*1 for even p,
// 0 for odd p. Note this clashes with the usual double factorial.
long long odd_double_factorial(int p);
long long catalan(int k);

}  // namespace ncprob

#endif
