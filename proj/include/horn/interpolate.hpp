#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "horn/errors.hpp"
#include "horn/horn_sets.hpp"
#include "horn/spectrum.hpp"

namespace horn {

// min/max envelope membership, entrywise
inline bool is_between(const Spectrum& v, const Spectrum& a, const Spectrum& b, double tol = 1e-9) {
  if (v.size() != a.size() || v.size() != b.size())
    throw std::invalid_argument("is_between: length mismatch");
  for (std::size_t i = 0; i < v.size(); ++i) {
    double lo = std::min(a[i], b[i]) - tol;
    double hi = std::max(a[i], b[i]) + tol;
    if (v[i] < lo || v[i] > hi) return false;
  }
  return true;
}

struct TauResult {
  double tau = 0.0;
  std::vector<HornTuple> tight;  // zero slack at tau; ordered by r, then lexicographically
};

// The direct inequalities are affine along alpha(t) = t*alphaP + (1-t)*alphaPP.
// tau is the largest critical root among constraints that are not identically
// zero on the path; every constraint still holds at tau because each one's
// feasible set is an interval reaching t = 1.
inline TauResult tau_tight(HornCatalog& cat, const Spectrum& alphaP, const Spectrum& alphaPP,
                           const std::vector<Spectrum>& betasP,
                           const std::vector<Spectrum>& betasPP, int N, double tol = 1e-9) {
  auto check_len = [N](const Spectrum& s, const char* what) {
    if (static_cast<int>(s.size()) != N)
      throw std::invalid_argument(std::string("tau_tight: ") + what + " must have length N");
  };
  check_len(alphaP, "alpha'");
  check_len(alphaPP, "alpha''");
  if (betasP.size() != static_cast<std::size_t>(cat.m()) || betasPP.size() != betasP.size())
    throw std::invalid_argument("tau_tight: one spectrum pair required per summand");
  for (const auto& b : betasP) check_len(b, "beta'");
  for (const auto& b : betasPP) check_len(b, "beta''");

  bool constant_path = alphaP == alphaPP && betasP == betasPP;
  struct Entry {
    const HornTuple* t;
    double s0, s1;  // slack at the double-primed (t=0) and primed (t=1) ends
  };
  std::vector<Entry> entries;
  for (int r = 1; r <= N; ++r)
    for (const auto& t : cat.cell(HornSetKind::T, N, r)) {
      double s1 = eval_horn(t, alphaP, betasP).slack();
      double s0 = eval_horn(t, alphaPP, betasPP).slack();
      if (s1 < -tol)
        throw std::invalid_argument("tau_tight: primed data violates " + to_string(t));
      entries.push_back({&t, s0, s1});
    }

  TauResult res;
  for (const auto& e : entries) {
    if (std::abs(e.s0) <= tol && std::abs(e.s1) <= tol) continue;  // vanishes along the path
    if (e.s0 == e.s1) continue;                                    // constant nonzero slack
    double root = e.s0 / (e.s0 - e.s1);
    if (root >= 0.0 && root <= 1.0 + tol) res.tau = std::max(res.tau, std::min(root, 1.0));
  }
  for (const auto& e : entries) {
    double s = res.tau * e.s1 + (1.0 - res.tau) * e.s0;
    if (std::abs(s) > tol) continue;
    if (!constant_path && std::abs(e.s0) <= tol && std::abs(e.s1) <= tol) continue;
    res.tight.push_back(*e.t);
  }
  return res;
}

struct SplitNode {
  int level;        // recursion depth; the complement block recurses one deeper
  int size;         // N at this level
  double tau;       // real mode only
  int walk_steps;   // integer mode only
  HornTuple tuple;  // the tight constraint split on; r == size means no remainder
};

struct InterpolationResult {
  Spectrum alpha;
  std::vector<Spectrum> betas;
  std::vector<SplitNode> decomposition;
  std::vector<std::string> steps;
};

namespace detail {

inline Spectrum restrict_to(const Spectrum& v, const std::vector<int>& positions) {
  Spectrum out;
  out.reserve(positions.size());
  for (int p : positions) out.push_back(v[static_cast<std::size_t>(p - 1)]);
  return out;
}

// place block values at positions I, remainder at the complement, then take
// the decreasing rearrangement; the rearranged vector inherits betweenness
inline Spectrum assemble(int N, const IndexSet& I, const Spectrum& block, const Spectrum& rest) {
  Spectrum out(static_cast<std::size_t>(N));
  for (int ell = 1; ell <= I.size(); ++ell)
    out[static_cast<std::size_t>(I(ell) - 1)] = block[static_cast<std::size_t>(ell - 1)];
  IndexSet Ic = complement(I, N);
  for (int ell = 1; ell <= Ic.size(); ++ell)
    out[static_cast<std::size_t>(Ic(ell) - 1)] = rest[static_cast<std::size_t>(ell - 1)];
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

struct InterpState {
  HornCatalog& cat;
  bool integer_mode;
  double tol;
  std::vector<SplitNode> nodes;
  std::vector<std::string> steps;
};

inline std::pair<Spectrum, std::vector<Spectrum>> interpolate_level(InterpState& st, Spectrum aP,
                                                                    Spectrum aPP,
                                                                    std::vector<Spectrum> bP,
                                                                    std::vector<Spectrum> bPP,
                                                                    int N, int level);

inline std::pair<Spectrum, std::vector<Spectrum>> split_and_recurse(
    InterpState& st, const HornTuple& pick, const Spectrum& a_now,
    const std::vector<Spectrum>& b_now, const Spectrum& aPP, const std::vector<Spectrum>& bPP,
    int N, int level) {
  int r = pick.r();
  Spectrum block_a = restrict_to(a_now, pick.I.values());
  std::vector<Spectrum> block_b;
  for (std::size_t k = 0; k < b_now.size(); ++k)
    block_b.push_back(restrict_to(b_now[k], pick.J[k].values()));
  if (r == N) return {block_a, block_b};

  IndexSet Ic = complement(pick.I, N);
  Spectrum aP1 = restrict_to(a_now, Ic.values());
  Spectrum aPP1 = restrict_to(aPP, Ic.values());
  std::vector<Spectrum> bP1, bPP1;
  for (std::size_t k = 0; k < b_now.size(); ++k) {
    IndexSet Jc = complement(pick.J[k], N);
    bP1.push_back(restrict_to(b_now[k], Jc.values()));
    bPP1.push_back(restrict_to(bPP[k], Jc.values()));
  }
  auto [rest_a, rest_b] = interpolate_level(st, std::move(aP1), std::move(aPP1), std::move(bP1),
                                            std::move(bPP1), N - r, level + 1);
  Spectrum out_a = assemble(N, pick.I, block_a, rest_a);
  std::vector<Spectrum> out_b;
  for (std::size_t k = 0; k < b_now.size(); ++k)
    out_b.push_back(assemble(N, pick.J[k], block_b[k], rest_b[k]));
  return {out_a, out_b};
}

inline std::pair<Spectrum, std::vector<Spectrum>> interpolate_real(InterpState& st, Spectrum aP,
                                                                   Spectrum aPP,
                                                                   std::vector<Spectrum> bP,
                                                                   std::vector<Spectrum> bPP, int N,
                                                                   int level) {
  TauResult tr = tau_tight(st.cat, aP, aPP, bP, bPP, N, st.tol);
  if (tr.tau == 0.0) {
    // every constraint already holds at the upper end, where the trace is balanced
    st.steps.push_back("level " + std::to_string(level) + ": size " + std::to_string(N) +
                       ", tau=0, upper data is realizable as is");
    return {std::move(aPP), std::move(bPP)};
  }
  if (tr.tight.empty())
    throw InternalError("interpolate: positive tau without a tight constraint");
  const HornTuple pick = tr.tight.front();
  st.steps.push_back("level " + std::to_string(level) + ": size " + std::to_string(N) + ", tau=" +
                     std::to_string(tr.tau) + ", split on " + to_string(pick));
  st.nodes.push_back({level, N, tr.tau, 0, pick});

  auto mix = [&](const Spectrum& hi, const Spectrum& lo) {
    Spectrum v(hi.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = tr.tau * hi[i] + (1.0 - tr.tau) * lo[i];
    return v;
  };
  Spectrum a_now = mix(aP, aPP);
  std::vector<Spectrum> b_now;
  for (std::size_t k = 0; k < bP.size(); ++k) b_now.push_back(mix(bP[k], bPP[k]));
  return split_and_recurse(st, pick, a_now, b_now, aPP, bPP, N, level);
}

inline long long ll_of(double v, const char* what) {
  double r = std::round(v);
  if (r != v) throw std::invalid_argument(std::string("interpolate: ") + what +
                                          " must have integer entries in integer mode");
  return static_cast<long long>(r);
}

inline std::pair<Spectrum, std::vector<Spectrum>> interpolate_integer(InterpState& st, Spectrum aP,
                                                                      Spectrum aPP,
                                                                      std::vector<Spectrum> bP,
                                                                      std::vector<Spectrum> bPP,
                                                                      int N, int level) {
  std::size_t m = bP.size();
  auto to_ll = [](const Spectrum& s, const char* what) {
    std::vector<long long> v;
    v.reserve(s.size());
    for (double x : s) v.push_back(ll_of(x, what));
    return v;
  };
  std::vector<long long> cur_a = to_ll(aP, "alpha'"), tgt_a = to_ll(aPP, "alpha''");
  std::vector<std::vector<long long>> cur_b, tgt_b;
  for (std::size_t k = 0; k < m; ++k) {
    cur_b.push_back(to_ll(bP[k], "beta'"));
    tgt_b.push_back(to_ll(bPP[k], "beta''"));
  }

  auto slack_of = [&](const HornTuple& t) {
    long long s = 0;
    for (std::size_t k = 0; k < m; ++k)
      for (int j : t.J[k].values()) s += cur_b[k][static_cast<std::size_t>(j - 1)];
    for (int i : t.I.values()) s -= cur_a[static_cast<std::size_t>(i - 1)];
    return s;
  };
  auto find_tight = [&]() -> const HornTuple* {
    for (int r = 1; r <= N; ++r)
      for (const auto& t : st.cat.cell(HornSetKind::T, N, r))
        if (slack_of(t) == 0) return &t;
    return nullptr;
  };
  auto all_slacks_ok = [&]() {
    for (int r = 1; r <= N; ++r)
      for (const auto& t : st.cat.cell(HornSetKind::T, N, r))
        if (slack_of(t) < 0) return false;
    return true;
  };
  auto decreasing_at = [](const std::vector<long long>& v, std::size_t i) {
    if (i > 0 && v[i - 1] < v[i]) return false;
    if (i + 1 < v.size() && v[i] < v[i + 1]) return false;
    return true;
  };

  int steps_taken = 0;
  const HornTuple* tight = nullptr;
  while (true) {
    tight = find_tight();
    if (tight) break;
    bool at_target = cur_a == tgt_a && cur_b == tgt_b;
    if (at_target) {
      st.steps.push_back("level " + std::to_string(level) + ": walk reached the upper data");
      Spectrum oa(cur_a.begin(), cur_a.end());
      std::vector<Spectrum> ob;
      for (auto& v : cur_b) ob.emplace_back(v.begin(), v.end());
      return {std::move(oa), std::move(ob)};
    }
    // one unit toward the target: alpha entries first, then each summand
    bool stepped = false;
    for (std::size_t vec = 0; vec <= m && !stepped; ++vec) {
      std::vector<long long>& cur = vec == 0 ? cur_a : cur_b[vec - 1];
      const std::vector<long long>& tgt = vec == 0 ? tgt_a : tgt_b[vec - 1];
      for (std::size_t i = 0; i < cur.size() && !stepped; ++i) {
        long long d = tgt[i] - cur[i];
        if (d == 0) continue;
        long long step = d > 0 ? 1 : -1;
        cur[i] += step;
        if (decreasing_at(cur, i) && all_slacks_ok()) {
          stepped = true;
          ++steps_taken;
          st.steps.push_back("level " + std::to_string(level) + ": step " +
                             std::to_string(steps_taken) + ": " +
                             (vec == 0 ? std::string("alpha") : "beta" + std::to_string(vec)) +
                             "[" + std::to_string(i + 1) + "] " + (step > 0 ? "+1" : "-1"));
        } else {
          cur[i] -= step;
        }
      }
    }
    if (!stepped)
      throw StuckStateError("interpolate: no unit step is legal and no constraint is tight");
  }

  st.steps.push_back("level " + std::to_string(level) + ": split on " + to_string(*tight) +
                     " after " + std::to_string(steps_taken) + " steps");
  st.nodes.push_back({level, N, 0.0, steps_taken, *tight});
  Spectrum a_now(cur_a.begin(), cur_a.end());
  std::vector<Spectrum> b_now;
  for (auto& v : cur_b) b_now.emplace_back(v.begin(), v.end());
  return split_and_recurse(st, *tight, a_now, b_now, aPP, bPP, N, level);
}

inline std::pair<Spectrum, std::vector<Spectrum>> interpolate_level(InterpState& st, Spectrum aP,
                                                                    Spectrum aPP,
                                                                    std::vector<Spectrum> bP,
                                                                    std::vector<Spectrum> bPP,
                                                                    int N, int level) {
  if (N == 0) return {Spectrum{}, std::vector<Spectrum>(bP.size())};
  return st.integer_mode
             ? interpolate_integer(st, std::move(aP), std::move(aPP), std::move(bP), std::move(bPP),
                                   N, level)
             : interpolate_real(st, std::move(aP), std::move(aPP), std::move(bP), std::move(bPP), N,
                                level);
}

}  // namespace detail

inline InterpolationResult interpolate(HornCatalog& cat, const Spectrum& alphaP,
                                       const Spectrum& alphaPP, const std::vector<Spectrum>& betasP,
                                       const std::vector<Spectrum>& betasPP, int N,
                                       bool integer_mode = false, double tol = 1e-9) {
  if (N < 0) throw std::invalid_argument("interpolate: N must be >= 0");
  if (!scan_finite(cat, alphaP, betasP, N, HornSetKind::T, FiniteForm::direct, {tol, 1}).empty())
    throw std::invalid_argument("interpolate: primed data violates a direct inequality");
  if (!scan_finite_reverse(cat, alphaPP, betasPP, N, {tol, 1}).empty())
    throw std::invalid_argument("interpolate: double-primed data violates a reverse inequality");
  validate_decreasing(alphaPP, "alpha''", tol);

  detail::InterpState st{cat, integer_mode, tol, {}, {}};
  auto [a, bs] = detail::interpolate_level(st, alphaP, alphaPP, betasP, betasPP, N, 0);
  return {std::move(a), std::move(bs), std::move(st.nodes), std::move(st.steps)};
}

struct FiniteInstance {
  int N = 0;
  Spectrum alphaP, alphaPP;
  std::vector<Spectrum> betasP, betasPP;
};

// Truncate two-sided data to a window of order n: the lower variant keeps n
// leading entries and pads with the deepest negatives as early as possible,
// the upper variant keeps N - n leading entries and pads as late as possible.
inline FiniteInstance truncate_pad(const TwoSidedSpectrum& alpha,
                                   const std::vector<TwoSidedSpectrum>& betas, int n) {
  if (n < 1) throw std::invalid_argument("truncate_pad: order must be >= 1");
  if (betas.empty()) throw std::invalid_argument("truncate_pad: need at least one summand");
  alpha.validate();
  for (const auto& b : betas) b.validate();
  int m = static_cast<int>(betas.size());
  int N = (m + 1) * n;
  auto window = [N](const TwoSidedSpectrum& s, int keep) {
    Spectrum v(static_cast<std::size_t>(N));
    for (int i = 1; i <= N; ++i) v[static_cast<std::size_t>(i - 1)] = i <= keep ? s.at(i) : s.at(i - N - 1);
    return v;
  };
  FiniteInstance out;
  out.N = N;
  out.alphaP = window(alpha, n);
  out.alphaPP = window(alpha, N - n);
  for (const auto& b : betas) {
    out.betasP.push_back(window(b, n));
    out.betasPP.push_back(window(b, N - n));
  }
  return out;
}

inline InterpolationResult realize_two_sided(HornCatalog& cat, const TwoSidedSpectrum& alpha,
                                             const std::vector<TwoSidedSpectrum>& betas, int n) {
  FiniteInstance inst = truncate_pad(alpha, betas, n);
  return interpolate(cat, inst.alphaP, inst.alphaPP, inst.betasP, inst.betasPP, inst.N);
}

}  // namespace horn
