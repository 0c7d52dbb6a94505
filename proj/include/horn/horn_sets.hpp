#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "horn/errors.hpp"
#include "horn/lr.hpp"
#include "horn/tuples.hpp"

namespace horn {

enum class HornSetKind { T, Tbar, Tdot };

inline const char* kind_name(HornSetKind k) {
  switch (k) {
    case HornSetKind::T: return "T";
    case HornSetKind::Tbar: return "Tbar";
    case HornSetKind::Tdot: return "Tdot";
  }
  return "?";
}

inline HornSetKind kind_from_name(const std::string& s) {
  if (s == "T") return HornSetKind::T;
  if (s == "Tbar") return HornSetKind::Tbar;
  if (s == "Tdot") return HornSetKind::Tdot;
  throw std::invalid_argument("unknown set kind: " + s);
}

struct CatalogLimits {
  int max_n_m2 = 8;          // largest N enumerated for m = 2
  int max_n_m3 = 6;          // largest N enumerated for m = 3
  int max_n_other = 5;       // largest N enumerated otherwise
  bool enforce = true;       // apply the N caps above
  long long max_candidates = 50'000'000;  // hard guard on the generated product space

  int n_cap(int m) const {
    if (m == 2) return max_n_m2;
    if (m == 3) return max_n_m3;
    return max_n_other;
  }
};

// Memoized enumeration of the recursive families over [N].  Cells are built
// bottom-up ((kind, N, r) needs the plain-kind cells over [r] only), published
// once, and never mutated afterwards, so references stay valid for the life
// of the catalog and readers need no further locking.
class HornCatalog {
public:
  explicit HornCatalog(int m, CatalogLimits limits = {}) : m_(m), limits_(limits) {
    if (m < 1) throw std::invalid_argument("HornCatalog: need at least one summand");
    if (const char* dir = std::getenv("HORN_CACHE_DIR")) cache_dir_ = dir;
  }

  int m() const { return m_; }
  const CatalogLimits& limits() const { return limits_; }

  // sorted list of members of the (kind, N, r) cell
  const std::vector<HornTuple>& cell(HornSetKind kind, int N, int r) {
    if (r < 0 || r > N) throw std::invalid_argument("HornCatalog::cell: need 0 <= r <= N");
    check_caps(N);
    std::tuple<int, int, int> key{static_cast<int>(kind), N, r};
    {
      std::shared_lock lock(mtx_);
      auto it = cells_.find(key);
      if (it != cells_.end()) return *it->second;
    }
    auto built = std::make_unique<std::vector<HornTuple>>(build_cell(kind, N, r));
    std::unique_lock lock(mtx_);
    auto [it, inserted] = cells_.emplace(key, std::move(built));
    return *it->second;
  }

  // Direct membership via the recursive definition; does not enumerate the
  // (N, r) cell itself, only the constraint cells over [r].
  bool member(HornSetKind kind, const HornTuple& t) {
    if (t.m() != m_) throw std::invalid_argument("HornCatalog::member: summand count mismatch");
    long long wl = t.weight_lhs(), wr = t.weight_rhs();
    if (kind == HornSetKind::Tbar ? wl < wr : wl != wr) return false;
    for (int s = 1; s < t.r(); ++s)
      for (const auto& c : cell(HornSetKind::T, t.r(), s))
        if (composed_slack(t, c) < 0) return false;
    if (kind == HornSetKind::Tdot) {
      std::vector<Partition> factors;
      factors.reserve(t.J.size());
      for (const auto& Jk : t.J) factors.push_back(pi(Jk));
      return multi_lr_coeff(pi(t.I), factors) == 1;
    }
    return true;
  }

  // weight(I o I') - sum_k weight(J^(k) o J'^(k)); members keep this >= 0
  static long long composed_slack(const HornTuple& t, const HornTuple& c) {
    long long s = compose(t.I, c.I).weight();
    for (int k = 0; k < t.m(); ++k)
      s -= compose(t.J[static_cast<std::size_t>(k)], c.J[static_cast<std::size_t>(k)]).weight();
    return s;
  }

  // Drop a relaxed-family member onto the strict family: I'(l) <= I(l) and
  // J'^(k)(l) >= J^(k)(l) pointwise, minimal weight then lexicographic.
  HornTuple reduce_to_T(const HornTuple& t) {
    if (t.m() != m_) throw std::invalid_argument("reduce_to_T: summand count mismatch");
    if (member(HornSetKind::T, t)) return t;
    const HornTuple* best = nullptr;
    for (const auto& c : cell(HornSetKind::T, t.N, t.r())) {
      bool ok = true;
      for (int l = 1; l <= t.r() && ok; ++l) {
        if (c.I(l) > t.I(l)) ok = false;
        for (int k = 0; k < m_ && ok; ++k)
          if (c.J[static_cast<std::size_t>(k)](l) < t.J[static_cast<std::size_t>(k)](l)) ok = false;
      }
      if (!ok) continue;
      if (best == nullptr || c.weight_lhs() < best->weight_lhs() ||
          (c.weight_lhs() == best->weight_lhs() && c < *best))
        best = &c;
    }
    if (best == nullptr)
      throw InternalError("reduce_to_T: no strict-family tuple below " + to_string(t));
    return *best;
  }

private:
  void check_caps(int N) const {
    if (limits_.enforce && N > limits_.n_cap(m_))
      throw ResourceLimitError("cell over [" + std::to_string(N) + "] exceeds the configured cap " +
                               std::to_string(limits_.n_cap(m_)) + " for m = " + std::to_string(m_));
  }

  std::vector<HornTuple> build_cell(HornSetKind kind, int N, int r) {
    if (auto cached = load_cache(kind, N, r)) return std::move(*cached);

    std::vector<HornTuple> out;
    if (r == 0) {
      out.emplace_back(N, IndexSet{}, std::vector<IndexSet>(static_cast<std::size_t>(m_)));
      store_cache(kind, N, r, out);
      return out;
    }

    // Subsets bucketed by weight: the weight condition prunes the product
    // space before any inequality is looked at.
    std::map<long long, std::vector<IndexSet>> buckets;
    {
      std::vector<int> v(static_cast<std::size_t>(r));
      std::iota(v.begin(), v.end(), 1);
      while (true) {
        IndexSet I{std::vector<int>(v)};
        buckets[I.weight()].push_back(std::move(I));
        int i = r - 1;
        while (i >= 0 && v[static_cast<std::size_t>(i)] == N - (r - 1 - i)) --i;
        if (i < 0) break;
        ++v[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < r; ++j) v[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j - 1)] + 1;
      }
    }
    guard_candidates(kind, buckets);

    // Constraint cells over [r] are fetched up front; they are the same for
    // every candidate in this cell.
    std::vector<const std::vector<HornTuple>*> constraints;
    for (int s = 1; s < r; ++s) constraints.push_back(&cell(HornSetKind::T, r, s));

    std::vector<Partition> factors(static_cast<std::size_t>(m_));
    std::vector<IndexSet> J(static_cast<std::size_t>(m_));
    for (const auto& [wI, Is] : buckets) {
      auto emit = [&](const IndexSet& I) {
        HornTuple t(N, I, J);
        for (const auto* cc : constraints)
          for (const auto& c : *cc)
            if (composed_slack(t, c) < 0) return;
        if (kind == HornSetKind::Tdot) {
          for (int k = 0; k < m_; ++k) factors[static_cast<std::size_t>(k)] = pi(J[static_cast<std::size_t>(k)]);
          if (multi_lr_coeff(pi(I), factors) != 1) return;
        }
        out.push_back(std::move(t));
      };
      auto assign = [&](auto&& self, int k, long long left) -> void {
        if (k == m_) {
          if (kind == HornSetKind::Tbar || left == 0)
            for (const auto& I : Is) emit(I);
          return;
        }
        for (const auto& [w, Js] : buckets) {
          if (w > left) break;
          for (const auto& Jk : Js) {
            J[static_cast<std::size_t>(k)] = Jk;
            self(self, k + 1, left - w);
          }
        }
      };
      assign(assign, 0, wI);
    }

    std::sort(out.begin(), out.end());
    store_cache(kind, N, r, out);
    return out;
  }

  // Exact size of the weight-compatible product space, computed from bucket
  // cardinalities before anything is generated.
  void guard_candidates(HornSetKind kind, const std::map<long long, std::vector<IndexSet>>& buckets) const {
    std::map<long long, double> conv{{0, 1.0}};
    for (int k = 0; k < m_; ++k) {
      std::map<long long, double> next;
      for (const auto& [w, c] : conv)
        for (const auto& [wb, v] : buckets) next[w + wb] += c * static_cast<double>(v.size());
      conv = std::move(next);
    }
    double total = 0;
    for (const auto& [wI, Is] : buckets) {
      double g = 0;
      for (const auto& [w, c] : conv)
        if (w == wI || (kind == HornSetKind::Tbar && w < wI)) g += c;
      total += g * static_cast<double>(Is.size());
    }
    if (total > static_cast<double>(limits_.max_candidates))
      throw ResourceLimitError("candidate space of about " + std::to_string(static_cast<long long>(total)) +
                               " tuples exceeds the cap " + std::to_string(limits_.max_candidates));
  }

  std::filesystem::path cache_file(HornSetKind kind, int N, int r) const {
    return cache_dir_ / (std::string(kind_name(kind)) + "_m" + std::to_string(m_) + "_N" +
                         std::to_string(N) + "_r" + std::to_string(r) + ".json");
  }

  std::optional<std::vector<HornTuple>> load_cache(HornSetKind kind, int N, int r) const {
    if (cache_dir_.empty()) return std::nullopt;
    std::ifstream in(cache_file(kind, N, r));
    if (!in) return std::nullopt;
    try {
      nlohmann::json j = nlohmann::json::parse(in);
      if (j.value("schema", 0) != 1 || j.value("kind", "") != kind_name(kind) ||
          j.value("m", -1) != m_ || j.value("N", -1) != N || j.value("r", -1) != r)
        return std::nullopt;
      std::vector<HornTuple> out;
      for (const auto& jt : j.at("tuples")) {
        IndexSet I{jt.at(0).get<std::vector<int>>()};
        std::vector<IndexSet> J;
        for (std::size_t k = 1; k < jt.size(); ++k) J.emplace_back(jt.at(k).get<std::vector<int>>());
        out.emplace_back(N, std::move(I), std::move(J));
      }
      return out;
    } catch (const std::exception&) {
      return std::nullopt;  // corrupt cache entries are recomputed, never trusted
    }
  }

  void store_cache(HornSetKind kind, int N, int r, const std::vector<HornTuple>& cellv) const {
    if (cache_dir_.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(cache_dir_, ec);
    nlohmann::json tuples = nlohmann::json::array();
    for (const auto& t : cellv) {
      nlohmann::json jt = nlohmann::json::array();
      jt.push_back(t.I.values());
      for (const auto& Jk : t.J) jt.push_back(Jk.values());
      tuples.push_back(std::move(jt));
    }
    nlohmann::json j{{"schema", 1}, {"kind", kind_name(kind)}, {"m", m_}, {"N", N}, {"r", r},
                     {"tuples", std::move(tuples)}};
    auto final_path = cache_file(kind, N, r);
    auto tmp = final_path;
    tmp += ".tmp" + std::to_string(std::random_device{}());
    {
      std::ofstream outf(tmp);
      if (!outf) return;
      outf << j.dump();
    }
    std::filesystem::rename(tmp, final_path, ec);
    if (ec) std::filesystem::remove(tmp, ec);
  }

  int m_;
  CatalogLimits limits_;
  std::filesystem::path cache_dir_;
  std::map<std::tuple<int, int, int>, std::unique_ptr<std::vector<HornTuple>>> cells_;
  mutable std::shared_mutex mtx_;
};

}  // namespace horn
