#pragma once

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "horn/index_set.hpp"

namespace horn {

namespace detail {

// Count LR skew tableaux of shape lambda/mu with content nu.  Cells are
// visited in the reverse reading order (rows top to bottom, right to left
// within a row), which is exactly the prefix order of the reverse reading
// word, so the lattice condition is checkable at placement time.
inline long long count_lr_tableaux(const Partition& lambda, const Partition& mu,
                                   const Partition& nu) {
  const int R = lambda.length();
  const int L = nu.length();

  std::vector<int> lam(static_cast<std::size_t>(R)), mu_pad(static_cast<std::size_t>(R));
  for (int r = 0; r < R; ++r) {
    lam[static_cast<std::size_t>(r)] = lambda.part(r + 1);
    mu_pad[static_cast<std::size_t>(r)] = mu.part(r + 1);
  }

  std::vector<std::pair<int, int>> cells;
  for (int r = 0; r < R; ++r)
    for (int c = lam[static_cast<std::size_t>(r)] - 1; c >= mu_pad[static_cast<std::size_t>(r)]; --c)
      cells.emplace_back(r, c);

  std::vector<int> remaining(static_cast<std::size_t>(L + 1), 0);
  for (int v = 1; v <= L; ++v) remaining[static_cast<std::size_t>(v)] = nu.part(v);
  std::vector<int> counts(static_cast<std::size_t>(L + 1), 0);
  std::vector<std::vector<int>> val(static_cast<std::size_t>(R));
  for (int r = 0; r < R; ++r) val[static_cast<std::size_t>(r)].assign(static_cast<std::size_t>(lam[static_cast<std::size_t>(r)]), 0);

  long long total = 0;
  auto dfs = [&](auto&& self, std::size_t k) -> void {
    if (k == cells.size()) {
      ++total;
      return;
    }
    auto [r, c] = cells[k];
    int vmin = 1;
    if (r > 0 && c >= mu_pad[static_cast<std::size_t>(r - 1)])  // filled cell above forces strict increase
      vmin = val[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(c)] + 1;
    int vmax = L;
    if (c + 1 < lam[static_cast<std::size_t>(r)])  // right neighbor is filled first
      vmax = val[static_cast<std::size_t>(r)][static_cast<std::size_t>(c + 1)];
    for (int v = vmin; v <= vmax; ++v) {
      if (remaining[static_cast<std::size_t>(v)] == 0) continue;
      if (v > 1 && counts[static_cast<std::size_t>(v - 1)] <= counts[static_cast<std::size_t>(v)]) continue;
      --remaining[static_cast<std::size_t>(v)];
      ++counts[static_cast<std::size_t>(v)];
      val[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = v;
      self(self, k + 1);
      val[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = 0;
      --counts[static_cast<std::size_t>(v)];
      ++remaining[static_cast<std::size_t>(v)];
    }
  };
  dfs(dfs, 0);
  return total;
}

inline std::string lr_key(const Partition& a, const Partition& b, const Partition& c) {
  std::string k;
  for (int i = 1, n = a.length(); i <= n; ++i) k += std::to_string(a.part(i)) + ',';
  k += '|';
  for (int i = 1, n = b.length(); i <= n; ++i) k += std::to_string(b.part(i)) + ',';
  k += '|';
  for (int i = 1, n = c.length(); i <= n; ++i) k += std::to_string(c.part(i)) + ',';
  return k;
}

// All partitions kappa with inner <= kappa <= outer pointwise and |kappa| = size
inline void partitions_between(const Partition& inner, const Partition& outer, long long size,
                               std::vector<Partition>& out) {
  const int R = outer.length();
  std::vector<int> cur(static_cast<std::size_t>(R), 0);
  auto dfs = [&](auto&& self, int idx, long long left) -> void {
    if (idx == R) {
      if (left == 0) out.emplace_back(cur);
      return;
    }
    int hi = outer.part(idx + 1);
    if (idx > 0) hi = std::min(hi, cur[static_cast<std::size_t>(idx - 1)]);
    int lo = inner.part(idx + 1);
    for (int v = lo; v <= hi && v <= left; ++v) {
      cur[static_cast<std::size_t>(idx)] = v;
      self(self, idx + 1, left - v);
    }
    cur[static_cast<std::size_t>(idx)] = 0;
  };
  if (inner.sum() <= size && size <= outer.sum()) dfs(dfs, 0, size);
}

}  // namespace detail

// Littlewood-Richardson coefficient c^lambda_{mu nu}
inline long long lr_coeff(const Partition& lambda, const Partition& mu, const Partition& nu) {
  if (lambda.sum() != mu.sum() + nu.sum()) return 0;
  if (!mu.contained_in(lambda) || !nu.contained_in(lambda)) return 0;

  static std::unordered_map<std::string, long long> memo;
  static std::mutex mtx;
  std::string key = detail::lr_key(lambda, mu, nu);
  {
    std::lock_guard<std::mutex> lock(mtx);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
  }
  long long v = detail::count_lr_tableaux(lambda, mu, nu);
  {
    std::lock_guard<std::mutex> lock(mtx);
    memo.emplace(std::move(key), v);
  }
  return v;
}

// Coefficient of the target class in the product of the factor classes,
// folded one factor at a time over intermediate partitions inside the target.
inline long long multi_lr_coeff(const Partition& target, const std::vector<Partition>& factors) {
  long long total = 0;
  for (const auto& f : factors) total += f.sum();
  if (total != target.sum()) return 0;

  std::map<Partition, long long> cur;
  cur[Partition{}] = 1;
  for (const auto& f : factors) {
    std::map<Partition, long long> next;
    for (const auto& [nu, c] : cur) {
      std::vector<Partition> mids;
      detail::partitions_between(nu, target, nu.sum() + f.sum(), mids);
      for (const auto& lam : mids) {
        long long lc = lr_coeff(lam, nu, f);
        if (lc > 0) next[lam] += c * lc;
      }
    }
    cur = std::move(next);
    if (cur.empty()) return 0;
  }
  auto it = cur.find(target);
  return it == cur.end() ? 0 : it->second;
}

// Independent small-weight oracle: multiply Schur polynomials as explicit
// monomial maps and peel off lex-leading terms.  Slow on purpose; it shares
// nothing with the tableau counter above.
namespace oracle {

using Poly = std::map<std::vector<int>, long long>;

inline Poly schur_poly(const Partition& p, int nvars) {
  const int R = p.length();
  Poly out;
  if (R > nvars) return out;  // no SSYT, the polynomial is zero
  std::vector<std::vector<int>> tab(static_cast<std::size_t>(R));
  for (int r = 0; r < R; ++r) tab[static_cast<std::size_t>(r)].assign(static_cast<std::size_t>(p.part(r + 1)), 0);
  std::vector<int> content(static_cast<std::size_t>(nvars), 0);
  auto dfs = [&](auto&& self, int r, int c) -> void {
    if (r == R) {
      ++out[content];
      return;
    }
    if (c == p.part(r + 1)) {
      self(self, r + 1, 0);
      return;
    }
    int lo = 1;
    if (c > 0) lo = std::max(lo, tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(c - 1)]);
    if (r > 0 && c < p.part(r)) lo = std::max(lo, tab[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(c)] + 1);
    for (int v = lo; v <= nvars; ++v) {
      tab[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = v;
      ++content[static_cast<std::size_t>(v - 1)];
      self(self, r, c + 1);
      --content[static_cast<std::size_t>(v - 1)];
    }
  };
  dfs(dfs, 0, 0);
  return out;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  return out;
}

// Expand a Schur-positive polynomial in the Schur basis by repeatedly
// stripping the lex-greatest monomial, whose exponent must be a partition.
inline std::map<Partition, long long> schur_expand(Poly f, int nvars) {
  std::map<Partition, long long> out;
  while (!f.empty()) {
    auto it = std::prev(f.end());
    if (it->second == 0) {
      f.erase(it);
      continue;
    }
    const std::vector<int>& e = it->first;
    long long c = it->second;
    for (std::size_t i = 1; i < e.size(); ++i)
      if (e[i] > e[i - 1]) throw std::logic_error("schur_expand: input is not Schur-positive");
    if (c < 0) throw std::logic_error("schur_expand: negative leading coefficient");
    Partition lam{std::vector<int>(e)};
    out[lam] += c;
    for (const auto& [es, cs] : schur_poly(lam, nvars)) {
      auto jt = f.find(es);
      long long nv = (jt == f.end() ? 0 : jt->second) - c * cs;
      if (nv == 0) {
        if (jt != f.end()) f.erase(jt);
      } else {
        f[es] = nv;
      }
    }
  }
  return out;
}

inline long long lr_coeff_bruteforce(const Partition& lambda, const Partition& mu,
                                     const Partition& nu) {
  int nvars = std::max(1, mu.length() + nu.length());
  if (lambda.length() > nvars) return 0;
  auto exp = schur_expand(poly_mul(schur_poly(mu, nvars), schur_poly(nu, nvars)), nvars);
  auto it = exp.find(lambda);
  return it == exp.end() ? 0 : it->second;
}

inline long long multi_lr_coeff_bruteforce(const Partition& target,
                                           const std::vector<Partition>& factors) {
  int nvars = 1;
  for (const auto& f : factors) nvars += f.length();
  if (target.length() > nvars) return 0;
  Poly acc{{std::vector<int>(static_cast<std::size_t>(nvars), 0), 1}};
  for (const auto& f : factors) acc = poly_mul(acc, schur_poly(f, nvars));
  auto exp = schur_expand(std::move(acc), nvars);
  auto it = exp.find(target);
  return it == exp.end() ? 0 : it->second;
}

}  // namespace oracle

}  // namespace horn
