#include "ncprob/tuplecomb.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <string>

namespace ncprob {

void IndexTuple::validate() const {
  for (int e : entries) {
    if (e < 0) throw ValidationError("IndexTuple: entries must be nonnegative");
  }
}

int IndexTuple::max_entry() const {
  int m = -1;
  for (int e : entries) m = std::max(m, e);
  return m;
}

IndexTuple canon(TupleRelation rel, const IndexTuple& t) {
  if (t.entries.empty()) return t;
  std::vector<int> out = t.entries;
  switch (rel) {
    case TupleRelation::Translation: {
      int mn = *std::min_element(out.begin(), out.end());
      for (int& e : out) e -= mn;
      break;
    }
    case TupleRelation::Order: {
      std::vector<int> sorted = out;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      for (int& e : out) {
        e = static_cast<int>(
            std::lower_bound(sorted.begin(), sorted.end(), e) - sorted.begin());
      }
      break;
    }
    case TupleRelation::Symmetric: {
      std::map<int, int> relabel;
      int next = 0;
      for (int& e : out) {
        auto [it, inserted] = relabel.try_emplace(e, next);
        if (inserted) ++next;
        e = it->second;
      }
      break;
    }
  }
  return IndexTuple(std::move(out));
}

bool are_equivalent(TupleRelation rel, const IndexTuple& s,
                    const IndexTuple& t) {
  if (s.size() != t.size()) {
    throw ValidationError("are_equivalent: tuple length mismatch");
  }
  return canon(rel, s) == canon(rel, t);
}

int partial_shift(int N, int n) { return n < N ? n : n + 1; }

IndexTuple apply_partial_shift(int N, const IndexTuple& t) {
  std::vector<int> out = t.entries;
  for (int& e : out) e = partial_shift(N, e);
  return IndexTuple(std::move(out));
}

int theta_composite(int N, const std::vector<int>& lvec, int n) {
  if (static_cast<int>(lvec.size()) != N + 1) {
    throw ValidationError("theta_composite: lvec must have N + 1 entries");
  }
  for (int l : lvec) {
    if (l < 0 || l > std::max(0, N - 1)) {
      throw ValidationError("theta_composite: lvec entries must lie in [0, N-1]");
    }
  }
  // Rightmost factor first: theta_N^{N^2 + l_N} down to theta_0^{l_0}.
  for (int i = N; i >= 0; --i) {
    const int power = i * N + lvec[static_cast<std::size_t>(i)];
    for (int k = 0; k < power; ++k) n = partial_shift(i, n);
  }
  return n;
}

IndexTuple theta_composite(int N, const std::vector<int>& lvec,
                           const IndexTuple& t) {
  std::vector<int> out = t.entries;
  for (int& e : out) e = theta_composite(N, lvec, e);
  return IndexTuple(std::move(out));
}

namespace {

void surjections_rec(int p, int k, std::vector<int>& cur, unsigned used_mask,
                     std::vector<OrderClass>& out) {
  const int pos = static_cast<int>(cur.size());
  const int remaining = p - pos;
  const int missing = k - std::popcount(used_mask);
  if (missing > remaining) return;  // cannot reach surjectivity
  if (pos == p) {
    out.push_back({IndexTuple(cur), k});
    return;
  }
  for (int v = 0; v < k; ++v) {
    cur.push_back(v);
    surjections_rec(p, k, cur, used_mask | (1u << v), out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<OrderClass> enumerate_order_classes(int p) {
  if (p < 0) throw ValidationError("enumerate_order_classes: p must be >= 0");
  if (p > kOrderClassCap) {
    throw ResourceError("enumerate_order_classes: p = " + std::to_string(p) +
                        " exceeds cap " + std::to_string(kOrderClassCap));
  }
  std::vector<OrderClass> out;
  if (p == 0) {
    out.push_back({IndexTuple{}, 0});
    return out;
  }
  for (int k = 1; k <= p; ++k) {
    std::vector<int> cur;
    cur.reserve(static_cast<std::size_t>(p));
    surjections_rec(p, k, cur, 0u, out);
  }
  std::sort(out.begin(), out.end(), [](const OrderClass& a, const OrderClass& b) {
    return a.canonical < b.canonical;
  });
  return out;
}

std::vector<PairPartition> enumerate_pair_partitions(int p) {
  if (p < 0) throw ValidationError("enumerate_pair_partitions: p must be >= 0");
  if (p > kPairPartitionCap) {
    throw ResourceError("enumerate_pair_partitions: p = " + std::to_string(p) +
                        " exceeds cap " + std::to_string(kPairPartitionCap));
  }
  std::vector<PairPartition> out;
  if (p % 2 != 0) return out;
  if (p == 0) {
    out.push_back({});
    return out;
  }
  std::vector<std::pair<int, int>> cur;
  std::vector<bool> taken(static_cast<std::size_t>(p + 1), false);
  // Pair the smallest free point with every larger free point.
  auto rec = [&](auto&& self) -> void {
    int a = 1;
    while (a <= p && taken[static_cast<std::size_t>(a)]) ++a;
    if (a > p) {
      out.push_back({cur});
      return;
    }
    taken[static_cast<std::size_t>(a)] = true;
    for (int b = a + 1; b <= p; ++b) {
      if (taken[static_cast<std::size_t>(b)]) continue;
      taken[static_cast<std::size_t>(b)] = true;
      cur.emplace_back(a, b);
      self(self);
      cur.pop_back();
      taken[static_cast<std::size_t>(b)] = false;
    }
    taken[static_cast<std::size_t>(a)] = false;
  };
  rec(rec);
  return out;
}

std::vector<OrderClass> enumerate_pair_classes(int p) {
  if (p < 0) throw ValidationError("enumerate_pair_classes: p must be >= 0");
  std::vector<OrderClass> out;
  if (p % 2 != 0 || p == 0) {
    if (p == 0) out.push_back({IndexTuple{}, 0});
    return out;
  }
  const int k = p / 2;
  const auto partitions = enumerate_pair_partitions(p);
  std::vector<int> perm(static_cast<std::size_t>(k));
  for (const PairPartition& pi : partitions) {
    for (int i = 0; i < k; ++i) perm[static_cast<std::size_t>(i)] = i;
    // Each assignment of distinct values 0..k-1 to the blocks is one class.
    do {
      std::vector<int> tup(static_cast<std::size_t>(p));
      for (int b = 0; b < k; ++b) {
        const auto& pr = pi.pairs[static_cast<std::size_t>(b)];
        tup[static_cast<std::size_t>(pr.first - 1)] = perm[static_cast<std::size_t>(b)];
        tup[static_cast<std::size_t>(pr.second - 1)] = perm[static_cast<std::size_t>(b)];
      }
      out.push_back({IndexTuple(std::move(tup)), k});
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  std::sort(out.begin(), out.end(), [](const OrderClass& a, const OrderClass& b) {
    return a.canonical < b.canonical;
  });
  return out;
}

int crossing_number(const PairPartition& pi) {
  int crossings = 0;
  const auto& ps = pi.pairs;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (i == j) continue;
      const auto [a, b] = ps[i];
      const auto [c, d] = ps[j];
      if (a < c && c < b && b < d) ++crossings;
    }
  }
  return crossings;
}

long long count_tuples_in_class(const OrderClass& cls, int N) {
  if (N < 0) throw ValidationError("count_tuples_in_class: N must be >= 0");
  return binomial(N, cls.distinct_values);
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

long long odd_double_factorial(int p) {
  if (p < 0) throw ValidationError("odd_double_factorial: p must be >= 0");
  if (p % 2 != 0) return 0;
  long long r = 1;
  for (int m = p - 1; m >= 1; m -= 2) r *= m;
  return r;
}

long long catalan(int k) {
  if (k < 0) throw ValidationError("catalan: k must be >= 0");
  return binomial(2 * k, k) / (k + 1);
}

}  // namespace ncprob
