#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "horn/errors.hpp"
#include "horn/interpolate.hpp"
#include "horn/spectrum.hpp"

namespace horn {

// A finite set of pinned spectrum positions.  Positive keys index the usual
// decreasing list; key -k addresses the k-th most negative value of a
// two-sided spectrum.  Entries must be extendable: finite, and weakly
// decreasing along ascending keys within each sign block.
class PartialSpectrum {
 public:
  PartialSpectrum() = default;

  explicit PartialSpectrum(std::map<int, double> entries) : entries_(std::move(entries)) {
    int prev_key = 0;
    double prev_val = 0.0;
    bool have_prev = false;
    for (const auto& [n, v] : entries_) {
      if (n == 0) throw std::invalid_argument("PartialSpectrum: position 0 is undefined");
      if (!std::isfinite(v)) throw std::invalid_argument("PartialSpectrum: entries must be finite");
      if (have_prev && (n > 0) == (prev_key > 0) && v > prev_val)
        throw std::invalid_argument("PartialSpectrum: entries must decrease along the index");
      prev_key = n;
      prev_val = v;
      have_prev = true;
    }
  }

  static PartialSpectrum of_full(const Spectrum& s) {
    std::map<int, double> e;
    for (int i = 1; i <= static_cast<int>(s.size()); ++i) e[i] = s[static_cast<std::size_t>(i - 1)];
    return PartialSpectrum(std::move(e));
  }

  bool empty() const { return entries_.empty(); }
  bool has(int n) const { return entries_.count(n) != 0; }
  double at(int n) const {
    auto it = entries_.find(n);
    if (it == entries_.end())
      throw std::invalid_argument("PartialSpectrum::at: position " + std::to_string(n) + " is not pinned");
    return it->second;
  }
  bool two_sided() const { return !entries_.empty() && entries_.begin()->first < 0; }
  const std::map<int, double>& entries() const { return entries_; }

  friend bool operator==(const PartialSpectrum&, const PartialSpectrum&) = default;

 private:
  std::map<int, double> entries_;
};

// full agrees with every pinned position
inline bool extends(const Spectrum& full, const PartialSpectrum& p, double tol = 0.0) {
  for (const auto& [n, v] : p.entries())
    if (std::abs(spectrum_at(full, n) - v) > tol) return false;
  return true;
}

inline bool extends(const TwoSidedSpectrum& full, const PartialSpectrum& p, double tol = 0.0) {
  for (const auto& [n, v] : p.entries())
    if (std::abs(full.at(n) - v) > tol) return false;
  return true;
}

// Tightest entrywise bounds over all decreasing lists extending the pinned
// data: a list extends it exactly when min <= . <= max holds entrywise.
struct Envelope {
  Spectrum min;
  Spectrum max;
};

// Staircases over [1, N]: min repeats the next pinned value to the left and
// drops to -inf past the last one, max repeats the previous pinned value to
// the right and starts at +inf before the first one.
inline Envelope min_max(const PartialSpectrum& p, int N) {
  if (N < 1) throw std::invalid_argument("min_max: N must be positive");
  constexpr double inf = std::numeric_limits<double>::infinity();
  Envelope env{Spectrum(static_cast<std::size_t>(N), -inf), Spectrum(static_cast<std::size_t>(N), inf)};
  int prev = 0;
  for (const auto& [n, v] : p.entries()) {
    if (n < 1 || n > N) throw std::invalid_argument("min_max: pinned position outside [1, N]");
    for (int i = prev + 1; i <= n; ++i) env.min[static_cast<std::size_t>(i - 1)] = v;
    prev = n;
  }
  int next = N + 1;
  for (auto it = p.entries().rbegin(); it != p.entries().rend(); ++it) {
    for (int i = it->first; i < next; ++i) env.max[static_cast<std::size_t>(i - 1)] = it->second;
    next = it->first;
  }
  return env;
}

inline bool envelope_contains(const Envelope& env, const Spectrum& s, double tol = 0.0) {
  for (int i = 1; i <= static_cast<int>(env.min.size()); ++i) {
    double v = spectrum_at(s, i);
    if (v < env.min[static_cast<std::size_t>(i - 1)] - tol) return false;
    if (v > env.max[static_cast<std::size_t>(i - 1)] + tol) return false;
  }
  return true;
}

struct TwoSidedEnvelope {
  TwoSidedSpectrum min;
  TwoSidedSpectrum max;
};

// Two-sided staircases materialized through at least `depth` positions per
// side.  The sign condition bounds every unpinned tail by zero, so min.pos
// and max.neg end in zeros, while max.pos and min.neg continue their last
// pinned value; the gaps next to zero that no pinned position bounds are the
// only infinite entries (min.neg front, max.pos front).
inline TwoSidedEnvelope min_max_two_sided(const PartialSpectrum& p, int depth) {
  if (depth < 1) throw std::invalid_argument("min_max_two_sided: depth must be positive");
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::pair<int, double>> pos, neg;  // neg keyed by k = |position|, ascending
  for (const auto& [n, v] : p.entries()) {
    if (n > 0) {
      if (v < 0) throw std::invalid_argument("min_max_two_sided: negative value at a positive position");
      pos.emplace_back(n, v);
    } else {
      if (v > 0) throw std::invalid_argument("min_max_two_sided: positive value at a negative position");
      neg.emplace_back(-n, v);
    }
  }
  std::sort(neg.begin(), neg.end());
  int len_pos = depth, len_neg = depth;
  if (!pos.empty()) len_pos = std::max(len_pos, pos.back().first);
  if (!neg.empty()) len_neg = std::max(len_neg, neg.back().first);

  TwoSidedEnvelope env;
  env.min.pos.assign(static_cast<std::size_t>(len_pos), 0.0);
  env.max.pos.assign(static_cast<std::size_t>(len_pos), inf);
  env.min.neg.assign(static_cast<std::size_t>(len_neg), -inf);
  env.max.neg.assign(static_cast<std::size_t>(len_neg), 0.0);

  int prev = 0;
  for (const auto& [n, v] : pos) {
    for (int i = prev + 1; i <= n; ++i) env.min.pos[static_cast<std::size_t>(i - 1)] = v;
    prev = n;
  }
  int next = len_pos + 1;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
    for (int i = it->first; i < next; ++i) env.max.pos[static_cast<std::size_t>(i - 1)] = it->second;
    next = it->first;
  }
  // the negative side mirrors the positive one with min and max exchanged
  prev = 0;
  for (const auto& [k, v] : neg) {
    for (int j = prev + 1; j <= k; ++j) env.max.neg[static_cast<std::size_t>(j - 1)] = v;
    prev = k;
  }
  next = len_neg + 1;
  for (auto it = neg.rbegin(); it != neg.rend(); ++it) {
    for (int j = it->first; j < next; ++j) env.min.neg[static_cast<std::size_t>(j - 1)] = it->second;
    next = it->first;
  }
  env.min.validate();
  env.max.validate();
  return env;
}

// Both sides of s must fit inside the materialized range of env.
inline bool envelope_contains(const TwoSidedEnvelope& env, const TwoSidedSpectrum& s, double tol = 0.0) {
  if (s.pos.size() > env.min.pos.size() || s.neg.size() > env.min.neg.size())
    throw std::invalid_argument("envelope_contains: envelope materialized too shallow");
  for (int n = 1; n <= static_cast<int>(env.min.pos.size()); ++n)
    if (s.at(n) < env.min.at(n) - tol || s.at(n) > env.max.at(n) + tol) return false;
  for (int n = 1; n <= static_cast<int>(env.min.neg.size()); ++n)
    if (s.at(-n) < env.min.at(-n) - tol || s.at(-n) > env.max.at(-n) + tol) return false;
  return true;
}

namespace detail {

inline std::string describe(const InequalityRecord& rec) {
  std::string s = std::string(family_name(rec.family)) + " " + to_string(rec.tuple);
  if (!rec.q.empty()) {
    s += " q=(";
    for (std::size_t k = 0; k < rec.q.size(); ++k) {
      if (k) s += " ";
      s += std::to_string(rec.q[k]);
    }
    s += ")";
  }
  return s + ": " + std::to_string(rec.lhs) + (rec.geq ? " >= " : " <= ") + std::to_string(rec.rhs);
}

}  // namespace detail

struct PartialCheck {
  bool feasible = true;
  std::vector<InequalityRecord> violations;  // direct records first, then reverse
};

// Feasibility of partially pinned N x N data: the direct family on the
// (min alpha, max beta) corner of the envelope box and the reverse family on
// the opposite corner.  Records that touch an unpinned infinite bound
// auto-satisfy inside the scans, so only pinned information is tested.
inline PartialCheck check_partial(HornCatalog& cat, const PartialSpectrum& alpha,
                                  const std::vector<PartialSpectrum>& betas, int N,
                                  const ScanOptions& opts = {}) {
  if (betas.size() != static_cast<std::size_t>(cat.m()))
    throw std::invalid_argument("check_partial: one spectrum required per summand");
  Envelope ea = min_max(alpha, N);
  std::vector<Spectrum> b_hi, b_lo;
  b_hi.reserve(betas.size());
  b_lo.reserve(betas.size());
  for (const auto& b : betas) {
    Envelope e = min_max(b, N);
    b_hi.push_back(std::move(e.max));
    b_lo.push_back(std::move(e.min));
  }
  PartialCheck out;
  out.violations = scan_finite(cat, ea.min, b_hi, N, HornSetKind::T, FiniteForm::direct, opts);
  auto rev = scan_finite_reverse(cat, ea.max, b_lo, N, opts);
  out.violations.insert(out.violations.end(), rev.begin(), rev.end());
  out.feasible = out.violations.empty();
  return out;
}

struct RealizedPartial {
  Spectrum alpha;
  std::vector<Spectrum> betas;
  double padding = 0.0;  // magnitude that replaced the infinite bounds
  InterpolationResult interp;
};

// Concrete decreasing lists extending the pinned data with matching sums.
// The infinite envelope bounds are replaced by +-C; a record still violated
// after substitution contains C with a nonzero count, so its slack grows
// linearly in C and doubling stabilizes after finitely many rounds.
inline RealizedPartial realize_partial(HornCatalog& cat, const PartialSpectrum& alpha,
                                       const std::vector<PartialSpectrum>& betas, int N,
                                       const ScanOptions& opts = {}) {
  PartialCheck pre = check_partial(cat, alpha, betas, N, opts);
  if (!pre.feasible)
    throw std::invalid_argument("realize_partial: infeasible data: " +
                                detail::describe(pre.violations.front()));

  double c0 = 1.0;
  for (const auto& [n, v] : alpha.entries()) c0 += std::abs(v);
  for (const auto& b : betas)
    for (const auto& [n, v] : b.entries()) c0 += std::abs(v);

  Envelope ea = min_max(alpha, N);
  std::vector<Envelope> eb;
  eb.reserve(betas.size());
  for (const auto& b : betas) eb.push_back(min_max(b, N));

  auto substitute = [](const Spectrum& s, double bound) {
    Spectrum out = s;
    for (double& v : out)
      if (std::isinf(v)) v = v < 0 ? -bound : bound;
    return out;
  };

  double C = c0;
  for (int doublings = 0; doublings <= 60; ++doublings, C *= 2.0) {
    Spectrum aP = substitute(ea.min, C), aPP = substitute(ea.max, C);
    std::vector<Spectrum> bP, bPP;
    for (const auto& e : eb) {
      bP.push_back(substitute(e.max, C));
      bPP.push_back(substitute(e.min, C));
    }
    if (!scan_finite(cat, aP, bP, N, HornSetKind::T, FiniteForm::direct, opts).empty()) continue;
    if (!scan_finite_reverse(cat, aPP, bPP, N, opts).empty()) continue;
    InterpolationResult res = interpolate(cat, aP, aPP, bP, bPP, N, false, opts.tol);
    RealizedPartial out;
    out.alpha = res.alpha;
    out.betas = res.betas;
    out.padding = C;
    out.interp = std::move(res);
    return out;
  }
  throw InternalError("realize_partial: padding failed to stabilize");
}

// Extremal values of the single position p over all feasible completions,
// as a closed form over the compositions of the index budget: the upper
// bound minimizes sum_k beta^(k)_{j_k} over sum_k (j_k - 1) = p - 1, the
// lower one maximizes it over sum_k (N - j_k) = N - p.
inline std::pair<double, double> johnson_bounds(const std::vector<Spectrum>& betas, int p, int N) {
  if (betas.empty()) throw std::invalid_argument("johnson_bounds: at least one summand required");
  if (p < 1 || p > N) throw std::invalid_argument("johnson_bounds: p must lie in [1, N]");
  for (const auto& b : betas) {
    if (static_cast<int>(b.size()) < N) throw std::invalid_argument("johnson_bounds: beta shorter than N");
    validate_decreasing(b, "beta");
  }
  int m = static_cast<int>(betas.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto extremum = [&](int total, bool maximize) {
    double best = maximize ? -inf : inf;
    auto rec = [&](auto&& self, int k, int left, double acc) -> void {
      if (k == m - 1) {
        if (left < 1 || left > N) return;
        double v = acc + betas[static_cast<std::size_t>(k)][static_cast<std::size_t>(left - 1)];
        best = maximize ? std::max(best, v) : std::min(best, v);
        return;
      }
      for (int jk = 1; jk <= std::min(N, left); ++jk)
        self(self, k + 1, left - jk, acc + betas[static_cast<std::size_t>(k)][static_cast<std::size_t>(jk - 1)]);
    };
    rec(rec, 0, total, 0.0);
    return best;
  };
  return {extremum((m - 1) * N + p, true), extremum(p + m - 1, false)};
}

// Existence of a positive-semidefinite completion of rank at most rho: the
// bottom N - rho values are pinned at zero and monotonicity makes the rest
// nonnegative.  With nothing pinned the question degenerates to whether the
// largest feasible bottom value clears zero.
inline PartialCheck lowrank_check(HornCatalog& cat, const std::vector<Spectrum>& betas, int rho, int N,
                                  const ScanOptions& opts = {}) {
  if (rho < 0 || rho > N) throw std::invalid_argument("lowrank_check: rank bound outside [0, N]");
  if (rho == N) return {johnson_bounds(betas, N, N).second >= -opts.tol, {}};
  std::map<int, double> zeros;
  for (int i = rho + 1; i <= N; ++i) zeros[i] = 0.0;
  std::vector<PartialSpectrum> full;
  full.reserve(betas.size());
  for (const auto& b : betas) {
    if (static_cast<int>(b.size()) < N) throw std::invalid_argument("lowrank_check: beta shorter than N");
    std::map<int, double> e;
    for (int i = 1; i <= N; ++i) e[i] = b[static_cast<std::size_t>(i - 1)];
    full.push_back(PartialSpectrum(std::move(e)));
  }
  return check_partial(cat, PartialSpectrum(std::move(zeros)), full, N, opts);
}

struct ExtendedRealization {
  TwoSidedSpectrum alpha;
  std::vector<TwoSidedSpectrum> betas;
  std::vector<std::string> steps;
};

namespace detail {

// One fill on the negative side.  Unpinned entries form a -inf prefix of the
// storage; the deepest one (adjacent to the finite part) is set to the
// largest admissible value: at most the next deeper entry, and at most the
// sum of the companion bounds at position -1.
inline int fill_deepest_neg(TwoSidedSpectrum& a, const std::vector<TwoSidedSpectrum>& others,
                            double& filled) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  int u = 0;
  while (u < static_cast<int>(a.neg.size()) && a.neg[static_cast<std::size_t>(u)] == -inf) ++u;
  if (u == 0) throw InternalError("fill_deepest_neg: nothing to fill");
  double cap = 0.0;
  for (const auto& o : others) cap += o.at(-1);
  filled = std::min(cap, a.at(-(u + 1)));
  a.neg[static_cast<std::size_t>(u - 1)] = filled;
  return -u;
}

}  // namespace detail

// Fill every unpinned bound of the sandwich with a concrete value, producing
// full two-sided spectra that extend the pinned data and pass every extended
// inequality at the truncation order.  The negative side of alpha fills from
// the deepest gap upward; each beta fills its positive head through the bar
// symmetry, which exchanges the two roles.
inline ExtendedRealization extend_two_sided(HornCatalog& cat, const PartialSpectrum& alpha,
                                            const std::vector<PartialSpectrum>& betas, int n_max,
                                            const ScanOptions& opts = {}) {
  if (betas.size() != static_cast<std::size_t>(cat.m()))
    throw std::invalid_argument("extend_two_sided: one spectrum required per summand");
  if (n_max < 1) throw std::invalid_argument("extend_two_sided: truncation order must be positive");
  auto check_extent = [n_max](const PartialSpectrum& p) {
    for (const auto& [n, v] : p.entries())
      if (std::abs(n) > n_max)
        throw std::invalid_argument("extend_two_sided: pinned position beyond the truncation order");
  };
  check_extent(alpha);
  for (const auto& b : betas) check_extent(b);

  TwoSidedEnvelope ea = min_max_two_sided(alpha, n_max);
  std::vector<TwoSidedEnvelope> eb;
  eb.reserve(betas.size());
  for (const auto& b : betas) eb.push_back(min_max_two_sided(b, n_max));

  ExtendedRealization out;
  out.alpha = ea.min;
  for (auto& e : eb) out.betas.push_back(e.max);

  {  // both corners of the sandwich must pass before any fill
    auto bad = scan_extended_direct(cat, out.alpha, out.betas, n_max, opts);
    if (bad.empty()) {
      std::vector<TwoSidedSpectrum> lo_bar;
      lo_bar.reserve(eb.size());
      for (auto& e : eb) lo_bar.push_back(e.min.bar());
      bad = scan_extended_direct(cat, ea.max.bar(), lo_bar, n_max, opts);
    }
    if (!bad.empty())
      throw std::invalid_argument("extend_two_sided: incompatible bounds: " +
                                  detail::describe(bad.front()));
  }

  auto guard = [&](const std::string& what) {
    auto bad = scan_extended_direct(cat, out.alpha, out.betas, n_max, opts);
    if (!bad.empty())
      throw InconsistentDataError("extend_two_sided: after " + what + ": " +
                                  detail::describe(bad.front()));
    out.steps.push_back(what);
  };
  auto has_inf = [](const std::vector<double>& v) {
    for (double x : v)
      if (std::isinf(x)) return true;
    return false;
  };

  while (has_inf(out.alpha.neg)) {
    double tau = 0.0;
    int idx = detail::fill_deepest_neg(out.alpha, out.betas, tau);
    guard("alpha(" + std::to_string(idx) + ") = " + std::to_string(tau));
  }
  for (std::size_t k = 0; k < out.betas.size(); ++k) {
    while (has_inf(out.betas[k].pos)) {
      TwoSidedSpectrum flipped = out.betas[k].bar();
      std::vector<TwoSidedSpectrum> others;
      others.push_back(out.alpha.bar());
      for (std::size_t j = 0; j < out.betas.size(); ++j)
        if (j != k) others.push_back(out.betas[j]);
      double tau = 0.0;
      int idx = detail::fill_deepest_neg(flipped, others, tau);
      out.betas[k] = flipped.bar();
      guard("beta" + std::to_string(k + 1) + "(" + std::to_string(-idx) + ") = " + std::to_string(-tau));
    }
  }
  return out;
}

}  // namespace horn
