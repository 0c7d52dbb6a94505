#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace horn {

// Strictly increasing set of 1-based indices.  Access is 1-based to match the
// I(1) < I(2) < ... < I(r) convention used everywhere downstream.
class IndexSet {
public:
  IndexSet() = default;
  IndexSet(std::initializer_list<int> xs) : v_(xs) { validate(); }
  explicit IndexSet(std::vector<int> xs) : v_(std::move(xs)) { validate(); }

  // {1, 2, ..., n}
  static IndexSet full(int n) {
    if (n < 0) throw std::invalid_argument("IndexSet::full: negative size");
    std::vector<int> v(static_cast<std::size_t>(n));
    std::iota(v.begin(), v.end(), 1);
    return IndexSet(std::move(v));
  }

  int size() const { return static_cast<int>(v_.size()); }
  bool empty() const { return v_.empty(); }

  // I(ell), 1 <= ell <= size()
  int operator()(int ell) const {
    if (ell < 1 || ell > size()) throw std::out_of_range("IndexSet: position out of range");
    return v_[static_cast<std::size_t>(ell - 1)];
  }

  int max() const {
    if (empty()) throw std::out_of_range("IndexSet::max on empty set");
    return v_.back();
  }

  bool contains(int i) const { return std::binary_search(v_.begin(), v_.end(), i); }

  // sum_ell (I(ell) - ell), the grading the recursion is stratified by
  long long weight() const {
    long long w = 0;
    for (int ell = 1; ell <= size(); ++ell) w += v_[static_cast<std::size_t>(ell - 1)] - ell;
    return w;
  }

  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }
  const std::vector<int>& values() const { return v_; }

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend std::strong_ordering operator<=>(const IndexSet& a, const IndexSet& b) {
    return std::lexicographical_compare_three_way(a.v_.begin(), a.v_.end(), b.v_.begin(),
                                                  b.v_.end());
  }

private:
  void validate() const {
    for (std::size_t k = 0; k < v_.size(); ++k) {
      if (v_[k] < 1 || (k > 0 && v_[k] <= v_[k - 1]))
        throw std::invalid_argument("IndexSet: entries must be >= 1 and strictly increasing");
    }
  }

  std::vector<int> v_;
};

// Integer partition: nonincreasing nonnegative parts.  Trailing zeros carry no
// information; equality, ordering and hashing ignore them.
class Partition {
public:
  Partition() = default;
  Partition(std::initializer_list<int> xs) : p_(xs) { validate(); }
  explicit Partition(std::vector<int> xs) : p_(std::move(xs)) { validate(); }

  // 1-based; parts beyond the stored length are 0
  int part(int k) const {
    if (k < 1) throw std::out_of_range("Partition: part index is 1-based");
    return k <= static_cast<int>(p_.size()) ? p_[static_cast<std::size_t>(k - 1)] : 0;
  }

  int length() const {  // number of nonzero parts
    int n = static_cast<int>(p_.size());
    while (n > 0 && p_[static_cast<std::size_t>(n - 1)] == 0) --n;
    return n;
  }

  long long sum() const { return std::accumulate(p_.begin(), p_.end(), 0LL); }
  bool empty() const { return length() == 0; }

  Partition normalized() const {
    std::vector<int> q(p_.begin(), p_.begin() + length());
    return Partition(std::move(q));
  }

  // pointwise <=, zero-padded
  bool contained_in(const Partition& other) const {
    int n = std::max(length(), other.length());
    for (int k = 1; k <= n; ++k)
      if (part(k) > other.part(k)) return false;
    return true;
  }

  const std::vector<int>& raw() const { return p_; }

  friend bool operator==(const Partition& a, const Partition& b) {
    int n = std::max(a.length(), b.length());
    for (int k = 1; k <= n; ++k)
      if (a.part(k) != b.part(k)) return false;
    return true;
  }
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    int n = std::max(a.length(), b.length());
    for (int k = 1; k <= n; ++k)
      if (auto c = a.part(k) <=> b.part(k); c != 0) return c;
    return std::strong_ordering::equal;
  }

private:
  void validate() const {
    for (std::size_t k = 0; k < p_.size(); ++k) {
      if (p_[k] < 0 || (k > 0 && p_[k] > p_[k - 1]))
        throw std::invalid_argument("Partition: parts must be nonincreasing and >= 0");
    }
  }

  std::vector<int> p_;
};

struct PartitionHash {
  std::size_t operator()(const Partition& p) const {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (int k = 1, n = p.length(); k <= n; ++k)
      h = h * 0x100000001b3ULL ^ static_cast<std::size_t>(p.part(k));
    return h;
  }
};

// pi(I) = (I(r) - r, ..., I(1) - 1); strict increase of I makes this a partition
inline Partition pi(const IndexSet& I) {
  int r = I.size();
  std::vector<int> p(static_cast<std::size_t>(r));
  for (int ell = 1; ell <= r; ++ell) p[static_cast<std::size_t>(ell - 1)] = I(r - ell + 1) - (r - ell + 1);
  return Partition(std::move(p));
}

// {N + 1 - i : i in I}
inline IndexSet sym(const IndexSet& I, int N) {
  if (!I.empty() && I.max() > N) throw std::invalid_argument("sym: index exceeds N");
  std::vector<int> v;
  v.reserve(static_cast<std::size_t>(I.size()));
  for (auto it = I.values().rbegin(); it != I.values().rend(); ++it) v.push_back(N + 1 - *it);
  return IndexSet(std::move(v));
}

// [N] \ I
inline IndexSet complement(const IndexSet& I, int N) {
  if (!I.empty() && I.max() > N) throw std::invalid_argument("complement: index exceeds N");
  std::vector<int> v;
  v.reserve(static_cast<std::size_t>(N - I.size()));
  for (int i = 1; i <= N; ++i)
    if (!I.contains(i)) v.push_back(i);
  return IndexSet(std::move(v));
}

// The p smallest elements of {1, 2, ...} \ I.  Unlike complement() this is not
// bounded by any ambient N; it serves splits whose depth exceeds the set.
inline IndexSet complement_prefix(const IndexSet& I, int p) {
  if (p < 0) throw std::invalid_argument("complement_prefix: negative count");
  std::vector<int> v;
  v.reserve(static_cast<std::size_t>(p));
  for (int i = 1; static_cast<int>(v.size()) < p; ++i)
    if (!I.contains(i)) v.push_back(i);
  return IndexSet(std::move(v));
}

// I o I' = {I(I'(ell))}; requires I' subset of [size(I)]
inline IndexSet compose(const IndexSet& I, const IndexSet& Iprime) {
  if (!Iprime.empty() && Iprime.max() > I.size())
    throw std::invalid_argument("compose: inner set exceeds outer size");
  std::vector<int> v;
  v.reserve(static_cast<std::size_t>(Iprime.size()));
  for (int i : Iprime) v.push_back(I(i));
  return IndexSet(std::move(v));
}

inline std::string to_string(const IndexSet& I) {
  std::string s = "[";
  for (int k = 1; k <= I.size(); ++k) {
    if (k > 1) s += ' ';
    s += std::to_string(I(k));
  }
  s += ']';
  return s;
}

inline std::string to_string(const Partition& p) {
  std::string s = "(";
  for (int k = 1, n = p.length(); k <= n; ++k) {
    if (k > 1) s += ',';
    s += std::to_string(p.part(k));
  }
  s += ')';
  return s;
}

}  // namespace horn
