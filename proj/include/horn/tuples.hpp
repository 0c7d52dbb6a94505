#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "horn/index_set.hpp"

namespace horn {

// A tuple (I, J^(1), ..., J^(m)) of subsets of [N], all of the same size r.
// Only the shape invariants live here; membership in the recursive families
// is decided by the catalog.
struct HornTuple {
  int N = 0;
  IndexSet I;
  std::vector<IndexSet> J;

  HornTuple() = default;
  HornTuple(int N_, IndexSet I_, std::vector<IndexSet> J_)
      : N(N_), I(std::move(I_)), J(std::move(J_)) {
    if (N < 0) throw std::invalid_argument("HornTuple: negative N");
    if (!I.empty() && I.max() > N) throw std::invalid_argument("HornTuple: I exceeds [N]");
    for (const auto& Jk : J) {
      if (Jk.size() != I.size()) throw std::invalid_argument("HornTuple: |J^(k)| != |I|");
      if (!Jk.empty() && Jk.max() > N) throw std::invalid_argument("HornTuple: J^(k) exceeds [N]");
    }
  }

  int r() const { return I.size(); }
  int m() const { return static_cast<int>(J.size()); }

  long long weight_lhs() const { return I.weight(); }
  long long weight_rhs() const {
    long long w = 0;
    for (const auto& Jk : J) w += Jk.weight();
    return w;
  }

  friend bool operator==(const HornTuple&, const HornTuple&) = default;
  friend std::strong_ordering operator<=>(const HornTuple& a, const HornTuple& b) {
    if (auto c = a.N <=> b.N; c != 0) return c;
    if (auto c = a.I <=> b.I; c != 0) return c;
    return std::lexicographical_compare_three_way(a.J.begin(), a.J.end(), b.J.begin(),
                                                  b.J.end());
  }
};

// Shift the largest sum(q) elements of I and the largest q_k of each J^(k) up
// by M, landing in the family over [N + M].  The shifted suffix stays strictly
// increasing because only a suffix moves, and it moves up uniformly.
inline HornTuple insert_gaps(const HornTuple& t, const std::vector<int>& q, int M) {
  if (static_cast<int>(q.size()) != t.m())
    throw std::invalid_argument("insert_gaps: need one count per J^(k)");
  if (M < 0) throw std::invalid_argument("insert_gaps: negative shift");
  long long qsum = 0;
  for (int qk : q) {
    if (qk < 0) throw std::invalid_argument("insert_gaps: negative count");
    qsum += qk;
  }
  if (qsum > t.r()) throw std::invalid_argument("insert_gaps: counts exceed r");

  auto shift_suffix = [M](const IndexSet& S, int count) {
    std::vector<int> v = S.values();
    for (std::size_t k = v.size() - static_cast<std::size_t>(count); k < v.size(); ++k) v[k] += M;
    return IndexSet(std::move(v));
  };

  std::vector<IndexSet> J2;
  J2.reserve(t.J.size());
  for (int k = 0; k < t.m(); ++k) J2.push_back(shift_suffix(t.J[static_cast<std::size_t>(k)], q[static_cast<std::size_t>(k)]));
  return HornTuple(t.N + M, shift_suffix(t.I, static_cast<int>(qsum)), std::move(J2));
}

// (I o I', J^(k) o J'^(k)) over the same [N]; tp must live over [r(t)]
inline HornTuple compose_tuples(const HornTuple& t, const HornTuple& tp) {
  if (tp.m() != t.m() || tp.N != t.r())
    throw std::invalid_argument("compose_tuples: shape mismatch");
  std::vector<IndexSet> J2;
  J2.reserve(t.J.size());
  for (int k = 0; k < t.m(); ++k)
    J2.push_back(compose(t.J[static_cast<std::size_t>(k)], tp.J[static_cast<std::size_t>(k)]));
  return HornTuple(t.N, compose(t.I, tp.I), std::move(J2));
}

// I'' = I u (I^c o I'), complements within [N]; tp must live over [N - r(t)]
inline HornTuple union_tuples(const HornTuple& t, const HornTuple& tp) {
  if (tp.m() != t.m() || tp.N != t.N - t.r())
    throw std::invalid_argument("union_tuples: shape mismatch");
  auto unite = [N = t.N](const IndexSet& S, const IndexSet& Sp) {
    IndexSet extra = compose(complement(S, N), Sp);
    std::vector<int> v = S.values();
    v.insert(v.end(), extra.begin(), extra.end());
    std::sort(v.begin(), v.end());
    return IndexSet(std::move(v));
  };
  std::vector<IndexSet> J2;
  J2.reserve(t.J.size());
  for (int k = 0; k < t.m(); ++k)
    J2.push_back(unite(t.J[static_cast<std::size_t>(k)], tp.J[static_cast<std::size_t>(k)]));
  return HornTuple(t.N, unite(t.I, tp.I), std::move(J2));
}

inline std::string to_string(const HornTuple& t) {
  std::string s = "(" + to_string(t.I);
  for (const auto& Jk : t.J) s += "," + to_string(Jk);
  s += ')';
  return s;
}

}  // namespace horn
