#pragma once

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include "horn/horn_sets.hpp"

namespace horn {

// Weakly decreasing eigenvalue list; positions are 1-based in all lookups.
// Entries beyond the stored length read as 0 (finite-support model).
using Spectrum = std::vector<double>;

inline double spectrum_at(const Spectrum& s, int i) {
  if (i < 1) throw std::invalid_argument("spectrum_at: positions are 1-based");
  return i <= static_cast<int>(s.size()) ? s[static_cast<std::size_t>(i - 1)] : 0.0;
}

inline void validate_decreasing(const Spectrum& s, const char* what, double tol = 0.0) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::isnan(s[i])) throw std::invalid_argument(std::string(what) + ": NaN entry");
    if (i > 0 && s[i] > s[i - 1] + tol)
      throw std::invalid_argument(std::string(what) + ": entries must be weakly decreasing");
  }
}

// Spectrum of a compact selfadjoint operator split at zero: pos[k-1] models
// the k-th largest positive value alpha_k, neg[k-1] models alpha_{-k} (so
// neg[0] is the most negative value).  Both tails are implicitly zero.
struct TwoSidedSpectrum {
  std::vector<double> pos;
  std::vector<double> neg;

  TwoSidedSpectrum() = default;
  TwoSidedSpectrum(std::vector<double> pos_, std::vector<double> neg_)
      : pos(std::move(pos_)), neg(std::move(neg_)) {
    validate();
  }

  void validate() const {
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if (std::isnan(pos[i])) throw std::invalid_argument("TwoSidedSpectrum: NaN entry");
      if (pos[i] < 0) throw std::invalid_argument("TwoSidedSpectrum: negative entry in pos");
      if (i > 0 && pos[i] > pos[i - 1])
        throw std::invalid_argument("TwoSidedSpectrum: pos must be weakly decreasing");
    }
    for (std::size_t i = 0; i < neg.size(); ++i) {
      if (std::isnan(neg[i])) throw std::invalid_argument("TwoSidedSpectrum: NaN entry");
      if (neg[i] > 0) throw std::invalid_argument("TwoSidedSpectrum: positive entry in neg");
      if (i > 0 && neg[i] < neg[i - 1])
        throw std::invalid_argument("TwoSidedSpectrum: neg must increase toward zero");
    }
  }

  // alpha_n for n != 0; zero beyond the stored lengths
  double at(int n) const {
    if (n == 0) throw std::invalid_argument("TwoSidedSpectrum::at: position 0 is undefined");
    if (n > 0) return n <= static_cast<int>(pos.size()) ? pos[static_cast<std::size_t>(n - 1)] : 0.0;
    int k = -n;
    return k <= static_cast<int>(neg.size()) ? neg[static_cast<std::size_t>(k - 1)] : 0.0;
  }

  // beta_k = -alpha_{-k}: swap the halves and negate
  TwoSidedSpectrum bar() const {
    TwoSidedSpectrum out;
    out.pos.reserve(neg.size());
    for (double v : neg) out.pos.push_back(-v);
    out.neg.reserve(pos.size());
    for (double v : pos) out.neg.push_back(-v);
    return out;
  }

  friend bool operator==(const TwoSidedSpectrum&, const TwoSidedSpectrum&) = default;
};

enum class Family { horn, horn_sym, extended, reverse_positive };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::horn: return "horn";
    case Family::horn_sym: return "horn_sym";
    case Family::extended: return "extended";
    case Family::reverse_positive: return "reverse_positive";
  }
  return "?";
}

struct InequalityRecord {
  HornTuple tuple;
  std::vector<int> q;  // per-summand split counts; empty for the finite families
  double lhs = 0.0;
  double rhs = 0.0;
  Family family = Family::horn;
  bool geq = false;        // the record asserts lhs >= rhs instead of lhs <= rhs
  bool bar_image = false;  // evaluated on the bar'd data during an extended scan
  bool auto_sat = false;   // satisfied by extended-real convention, slack not meaningful

  int q_total() const {
    int s = 0;
    for (int v : q) s += v;
    return s;
  }
  double slack() const { return geq ? lhs - rhs : rhs - lhs; }
  bool violated(double tol = 1e-9) const { return !auto_sat && slack() < -tol; }
  bool tight(double tol = 1e-9) const { return !auto_sat && std::abs(slack()) <= tol; }
};

struct ScanOptions {
  double tol = 1e-9;
  int threads = 1;
};

namespace detail {

// Accumulate one term.  The small side must stay below the big side, so -inf
// there (or +inf on the big side) satisfies the record outright, while the
// opposite placements cannot be given a meaning and are rejected.
inline void add_side(double v, bool small_side, double& acc, bool& auto_sat) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (std::isnan(v)) throw std::invalid_argument("inequality term: NaN");
  if (small_side) {
    if (v == inf) throw std::invalid_argument("inequality term: +inf on the bounded side");
    if (v == -inf) auto_sat = true;
  } else {
    if (v == -inf) throw std::invalid_argument("inequality term: -inf on the bounding side");
    if (v == inf) auto_sat = true;
  }
  acc += v;
}

inline void check_summands(const HornTuple& t, std::size_t betas) {
  if (betas != static_cast<std::size_t>(t.m()))
    throw std::invalid_argument("evaluation: one spectrum required per summand");
}

// every q in [0, per_cap]^m with sum(q) <= sum_cap, lexicographic order
inline void for_each_split(int m, int per_cap, int sum_cap,
                           const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> q(static_cast<std::size_t>(m), 0);
  auto rec = [&](auto&& self, int k, int left) -> void {
    if (k == m) {
      fn(q);
      return;
    }
    for (int v = 0; v <= std::min(per_cap, left); ++v) {
      q[static_cast<std::size_t>(k)] = v;
      self(self, k + 1, left - v);
    }
    q[static_cast<std::size_t>(k)] = 0;
  };
  rec(rec, 0, sum_cap);
}

inline std::vector<InequalityRecord> run_record_jobs(
    std::vector<std::function<std::vector<InequalityRecord>()>> jobs, int threads) {
  std::vector<std::vector<InequalityRecord>> results(jobs.size());
  if (threads <= 1 || jobs.size() <= 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) results[i] = jobs[i]();
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mtx;
    auto worker = [&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        try {
          results[i] = jobs[i]();
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mtx);
          if (!first_error) first_error = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(threads), jobs.size());
    pool.reserve(n);
    for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }
  std::vector<InequalityRecord> out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

}  // namespace detail

// sum_{l} alpha_{I(l)} <= sum_k sum_l beta^(k)_{J^(k)(l)}
inline InequalityRecord eval_horn(const HornTuple& t, const Spectrum& alpha,
                                  const std::vector<Spectrum>& betas) {
  detail::check_summands(t, betas.size());
  InequalityRecord rec;
  rec.tuple = t;
  rec.family = Family::horn;
  for (int l = 1; l <= t.r(); ++l)
    detail::add_side(spectrum_at(alpha, t.I(l)), true, rec.lhs, rec.auto_sat);
  for (int k = 0; k < t.m(); ++k)
    for (int l = 1; l <= t.r(); ++l)
      detail::add_side(spectrum_at(betas[static_cast<std::size_t>(k)], t.J[static_cast<std::size_t>(k)](l)), false,
                       rec.rhs, rec.auto_sat);
  return rec;
}

// Complement form of the same family: sums over [N] \ sym(.) on both sides.
inline InequalityRecord eval_horn_sym(const HornTuple& t, const Spectrum& alpha,
                                      const std::vector<Spectrum>& betas) {
  detail::check_summands(t, betas.size());
  InequalityRecord rec;
  rec.tuple = t;
  rec.family = Family::horn_sym;
  for (int i : complement(sym(t.I, t.N), t.N))
    detail::add_side(spectrum_at(alpha, i), true, rec.lhs, rec.auto_sat);
  for (int k = 0; k < t.m(); ++k)
    for (int j : complement(sym(t.J[static_cast<std::size_t>(k)], t.N), t.N))
      detail::add_side(spectrum_at(betas[static_cast<std::size_t>(k)], j), false, rec.rhs, rec.auto_sat);
  return rec;
}

// Reverse-direction hypothesis on doubled data: plain complements and >=.
// sum_{[N] \ I} alpha_i >= sum_k sum_{[N] \ J^(k)} beta^(k)_j
inline InequalityRecord eval_horn_reverse(const HornTuple& t, const Spectrum& alpha,
                                          const std::vector<Spectrum>& betas) {
  detail::check_summands(t, betas.size());
  InequalityRecord rec;
  rec.tuple = t;
  rec.family = Family::horn_sym;
  rec.geq = true;
  for (int i : complement(t.I, t.N))
    detail::add_side(spectrum_at(alpha, i), false, rec.lhs, rec.auto_sat);
  for (int k = 0; k < t.m(); ++k)
    for (int j : complement(t.J[static_cast<std::size_t>(k)], t.N))
      detail::add_side(spectrum_at(betas[static_cast<std::size_t>(k)], j), true, rec.rhs, rec.auto_sat);
  return rec;
}

// Two-sided form: the largest q (resp. q_k) positions wrap to negative
// indices via i -> i - N - 1.
inline InequalityRecord eval_extended(const HornTuple& t, const std::vector<int>& q,
                                      const TwoSidedSpectrum& alpha,
                                      const std::vector<TwoSidedSpectrum>& betas) {
  if (betas.size() != static_cast<std::size_t>(t.m()))
    throw std::invalid_argument("eval_extended: one spectrum required per summand");
  if (q.size() != static_cast<std::size_t>(t.m()))
    throw std::invalid_argument("eval_extended: one split count required per summand");
  int q_total = 0;
  for (int v : q) {
    if (v < 0) throw std::invalid_argument("eval_extended: negative split count");
    q_total += v;
  }
  if (q_total > t.r()) throw std::invalid_argument("eval_extended: split counts exceed r");

  InequalityRecord rec;
  rec.tuple = t;
  rec.q = q;
  rec.family = Family::extended;
  for (int l = 1; l <= t.r(); ++l) {
    int idx = l <= t.r() - q_total ? t.I(l) : t.I(l) - t.N - 1;
    detail::add_side(alpha.at(idx), true, rec.lhs, rec.auto_sat);
  }
  for (int k = 0; k < t.m(); ++k) {
    const auto& Jk = t.J[static_cast<std::size_t>(k)];
    int qk = q[static_cast<std::size_t>(k)];
    for (int l = 1; l <= t.r(); ++l) {
      int idx = l <= t.r() - qk ? Jk(l) : Jk(l) - t.N - 1;
      detail::add_side(betas[static_cast<std::size_t>(k)].at(idx), false, rec.rhs, rec.auto_sat);
    }
  }
  return rec;
}

// Reverse family for positive compacts: the q = sum(q_k) smallest indices
// outside I against the q_k smallest outside each J^(k).
inline InequalityRecord eval_reverse_positive(const HornTuple& t, const std::vector<int>& q,
                                              const Spectrum& alpha,
                                              const std::vector<Spectrum>& betas) {
  detail::check_summands(t, betas.size());
  if (q.size() != static_cast<std::size_t>(t.m()))
    throw std::invalid_argument("eval_reverse_positive: one split count required per summand");
  InequalityRecord rec;
  rec.tuple = t;
  rec.q = q;
  rec.family = Family::reverse_positive;
  rec.geq = true;
  int q_total = 0;
  for (int v : q) {
    if (v < 0) throw std::invalid_argument("eval_reverse_positive: negative split count");
    q_total += v;
  }
  for (int i : complement_prefix(t.I, q_total))
    detail::add_side(spectrum_at(alpha, i), false, rec.lhs, rec.auto_sat);
  for (int k = 0; k < t.m(); ++k)
    for (int j : complement_prefix(t.J[static_cast<std::size_t>(k)], q[static_cast<std::size_t>(k)]))
      detail::add_side(spectrum_at(betas[static_cast<std::size_t>(k)], j), true, rec.rhs, rec.auto_sat);
  return rec;
}

enum class FiniteForm { direct, complement };

// All violated records over the (kind, N, r <= N) cells for N x N data.
inline std::vector<InequalityRecord> scan_finite(HornCatalog& cat, const Spectrum& alpha,
                                                 const std::vector<Spectrum>& betas, int N,
                                                 HornSetKind kind = HornSetKind::T,
                                                 FiniteForm form = FiniteForm::direct,
                                                 const ScanOptions& opts = {}) {
  if (betas.size() != static_cast<std::size_t>(cat.m()))
    throw std::invalid_argument("scan_finite: one spectrum required per summand");
  if (static_cast<int>(alpha.size()) < N)
    throw std::invalid_argument("scan_finite: alpha shorter than N");
  validate_decreasing(alpha, "alpha", opts.tol);
  for (const auto& b : betas) {
    if (static_cast<int>(b.size()) < N) throw std::invalid_argument("scan_finite: beta shorter than N");
    validate_decreasing(b, "beta", opts.tol);
  }
  std::vector<InequalityRecord> out;
  for (int r = 0; r <= N; ++r)
    for (const auto& t : cat.cell(kind, N, r)) {
      InequalityRecord rec =
          form == FiniteForm::direct ? eval_horn(t, alpha, betas) : eval_horn_sym(t, alpha, betas);
      if (rec.violated(opts.tol)) out.push_back(std::move(rec));
    }
  return out;
}

// Violations of the reverse-direction hypothesis over the strict cells.
inline std::vector<InequalityRecord> scan_finite_reverse(HornCatalog& cat, const Spectrum& alpha,
                                                         const std::vector<Spectrum>& betas, int N,
                                                         const ScanOptions& opts = {}) {
  if (betas.size() != static_cast<std::size_t>(cat.m()))
    throw std::invalid_argument("scan_finite_reverse: one spectrum required per summand");
  std::vector<InequalityRecord> out;
  for (int r = 0; r <= N; ++r)
    for (const auto& t : cat.cell(HornSetKind::T, N, r)) {
      InequalityRecord rec = eval_horn_reverse(t, alpha, betas);
      if (rec.violated(opts.tol)) out.push_back(std::move(rec));
    }
  return out;
}

// Extended scan over every cell N <= N_max, every admissible split, for the
// data and its bar image.  Empty output certifies the condition at truncation
// order N_max only.
inline std::vector<InequalityRecord> scan_extended(HornCatalog& cat, const TwoSidedSpectrum& alpha,
                                                   const std::vector<TwoSidedSpectrum>& betas,
                                                   int N_max, const ScanOptions& opts = {}) {
  if (betas.size() != static_cast<std::size_t>(cat.m()))
    throw std::invalid_argument("scan_extended: one spectrum required per summand");
  alpha.validate();
  for (const auto& b : betas) b.validate();

  TwoSidedSpectrum alpha_bar = alpha.bar();
  std::vector<TwoSidedSpectrum> betas_bar;
  betas_bar.reserve(betas.size());
  for (const auto& b : betas) betas_bar.push_back(b.bar());

  std::vector<std::function<std::vector<InequalityRecord>()>> jobs;
  for (int N = 1; N <= N_max; ++N)
    for (int r = 0; r <= N; ++r)
      jobs.push_back([&, N, r] {
        std::vector<InequalityRecord> local;
        for (const auto& t : cat.cell(HornSetKind::T, N, r))
          detail::for_each_split(t.m(), r, r, [&](const std::vector<int>& q) {
            for (bool bar : {false, true}) {
              InequalityRecord rec = bar ? eval_extended(t, q, alpha_bar, betas_bar)
                                         : eval_extended(t, q, alpha, betas);
              rec.bar_image = bar;
              if (rec.violated(opts.tol)) local.push_back(std::move(rec));
            }
          });
        return local;
      });
  // cells must exist before parallel workers race to read them
  for (int N = 1; N <= N_max; ++N)
    for (int r = 0; r <= N; ++r) cat.cell(HornSetKind::T, N, r);
  return detail::run_record_jobs(std::move(jobs), opts.threads);
}

// Same cells and splits, one orientation, no bar pass.  Envelope-style data
// keeps -inf on the bounded side and +inf on the bounding side, where the
// records auto-satisfy; the bar image would move those entries to the side
// where they have no meaning, so callers holding such data scan each
// orientation they need explicitly.
inline std::vector<InequalityRecord> scan_extended_direct(HornCatalog& cat,
                                                          const TwoSidedSpectrum& alpha,
                                                          const std::vector<TwoSidedSpectrum>& betas,
                                                          int N_max, const ScanOptions& opts = {}) {
  if (betas.size() != static_cast<std::size_t>(cat.m()))
    throw std::invalid_argument("scan_extended_direct: one spectrum required per summand");
  alpha.validate();
  for (const auto& b : betas) b.validate();

  std::vector<std::function<std::vector<InequalityRecord>()>> jobs;
  for (int N = 1; N <= N_max; ++N)
    for (int r = 0; r <= N; ++r)
      jobs.push_back([&, N, r] {
        std::vector<InequalityRecord> local;
        for (const auto& t : cat.cell(HornSetKind::T, N, r))
          detail::for_each_split(t.m(), r, r, [&](const std::vector<int>& q) {
            InequalityRecord rec = eval_extended(t, q, alpha, betas);
            if (rec.violated(opts.tol)) local.push_back(std::move(rec));
          });
        return local;
      });
  for (int N = 1; N <= N_max; ++N)
    for (int r = 0; r <= N; ++r) cat.cell(HornSetKind::T, N, r);
  return detail::run_record_jobs(std::move(jobs), opts.threads);
}

// Positive-compact scan: the direct family plus the reverse family with
// unconstrained split depth up to q_cap per summand.  Only the top cells are
// walked; smaller-N members reappear there with identical index sets.
inline std::vector<InequalityRecord> scan_positive(HornCatalog& cat, const Spectrum& alpha,
                                                   const std::vector<Spectrum>& betas, int N_max,
                                                   int q_cap = -1, const ScanOptions& opts = {}) {
  if (betas.size() != static_cast<std::size_t>(cat.m()))
    throw std::invalid_argument("scan_positive: one spectrum required per summand");
  validate_decreasing(alpha, "alpha", opts.tol);
  if (!alpha.empty() && alpha.back() < -opts.tol)
    throw std::invalid_argument("scan_positive: alpha must be nonnegative");
  for (const auto& b : betas) {
    validate_decreasing(b, "beta", opts.tol);
    if (!b.empty() && b.back() < -opts.tol)
      throw std::invalid_argument("scan_positive: betas must be nonnegative");
  }
  if (q_cap < 0) q_cap = N_max;

  std::vector<std::function<std::vector<InequalityRecord>()>> jobs;
  for (int r = 0; r <= N_max; ++r)
    jobs.push_back([&, r, q_cap] {
      std::vector<InequalityRecord> local;
      for (const auto& t : cat.cell(HornSetKind::T, N_max, r)) {
        InequalityRecord direct = eval_horn(t, alpha, betas);
        if (direct.violated(opts.tol)) local.push_back(std::move(direct));
        detail::for_each_split(t.m(), q_cap, q_cap * t.m(), [&](const std::vector<int>& q) {
          InequalityRecord rec = eval_reverse_positive(t, q, alpha, betas);
          if (rec.violated(opts.tol)) local.push_back(std::move(rec));
        });
      }
      return local;
    });
  for (int r = 0; r <= N_max; ++r) cat.cell(HornSetKind::T, N_max, r);
  return detail::run_record_jobs(std::move(jobs), opts.threads);
}

// sum(alpha) - sum_k sum(beta^(k)); the equality side of the finite problem
inline double trace_gap(const Spectrum& alpha, const std::vector<Spectrum>& betas) {
  double g = 0;
  for (double v : alpha) {
    if (!std::isfinite(v)) throw std::invalid_argument("trace_gap: nonfinite entry");
    g += v;
  }
  for (const auto& b : betas)
    for (double v : b) {
      if (!std::isfinite(v)) throw std::invalid_argument("trace_gap: nonfinite entry");
      g -= v;
    }
  return g;
}

}  // namespace horn
