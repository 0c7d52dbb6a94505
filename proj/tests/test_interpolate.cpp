#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "horn/interpolate.hpp"

using namespace horn;
using Catch::Approx;

namespace {

Spectrum harmonic(int n, double scale = 1.0) {
  Spectrum v;
  for (int i = 1; i <= n; ++i) v.push_back(scale / i);
  return v;
}

bool integral(const Spectrum& v) {
  for (double x : v)
    if (x != std::round(x)) return false;
  return true;
}

void check_result(HornCatalog& cat, const InterpolationResult& res, const Spectrum& aP,
                  const Spectrum& aPP, const std::vector<Spectrum>& bP,
                  const std::vector<Spectrum>& bPP, int N, double tol) {
  REQUIRE(std::abs(trace_gap(res.alpha, res.betas)) <= tol);
  REQUIRE(scan_finite(cat, res.alpha, res.betas, N).empty());
  REQUIRE(is_between(res.alpha, aP, aPP, tol));
  for (std::size_t k = 0; k < res.betas.size(); ++k)
    REQUIRE(is_between(res.betas[k], bP[k], bPP[k], tol));
  validate_decreasing(res.alpha, "result alpha", tol);
}

}  // namespace

TEST_CASE("tau and the tight set on pinned paths") {
  HornCatalog cat(2);
  std::vector<Spectrum> b10{{1, 0}, {1, 0}};

  SECTION("constant feasible path sits at tau = 0 with its equalities tight") {
    auto [tau, tight] = tau_tight(cat, {1, 1}, {1, 1}, b10, b10, 2);
    REQUIRE(tau == 0.0);
    std::vector<std::string> names;
    for (const auto& t : tight) names.push_back(to_string(t));
    REQUIRE(names == std::vector<std::string>{"([2],[1],[2])", "([2],[2],[1])",
                                              "([1 2],[1 2],[1 2])"});
  }
  SECTION("the full-support constraint drives tau to 1") {
    auto [tau, tight] = tau_tight(cat, {1, 1}, {3, 1}, b10, b10, 2);
    REQUIRE(tau == Approx(1.0));
    REQUIRE(tight.size() == 1);
    REQUIRE(to_string(tight.front()) == "([1 2],[1 2],[1 2])");
  }
  SECTION("constraints tight only at the primed end still pin tau = 1") {
    auto [tau, tight] = tau_tight(cat, {1, 1}, {2, 0}, b10, b10, 2);
    REQUIRE(tau == Approx(1.0));
    REQUIRE(tight.size() == 2);
    REQUIRE(to_string(tight[0]) == "([2],[1],[2])");
    REQUIRE(to_string(tight[1]) == "([2],[2],[1])");
  }
  SECTION("a primed violation is a hypothesis error") {
    REQUIRE_THROWS_AS(tau_tight(cat, {3, 0}, {3, 0}, b10, b10, 2), std::invalid_argument);
  }
}

TEST_CASE("interpolation on pinned instances") {
  HornCatalog cat(2);
  std::vector<Spectrum> b10{{1, 0}, {1, 0}};

  SECTION("a feasible trace-balanced fixed point returns unchanged") {
    std::vector<Spectrum> bs{{1, 1}, {1, 0}};
    for (bool integer_mode : {false, true}) {
      auto res = interpolate(cat, {2, 1}, {2, 1}, bs, bs, 2, integer_mode);
      REQUIRE(res.alpha == Spectrum{2, 1});
      REQUIRE(res.betas == bs);
    }
  }
  SECTION("the two-point widening instance lands on the primed data") {
    for (bool integer_mode : {false, true}) {
      auto res = interpolate(cat, {1, 1}, {2, 0}, b10, b10, 2, integer_mode);
      REQUIRE(res.alpha[0] == Approx(1.0));
      REQUIRE(res.alpha[1] == Approx(1.0));
      REQUIRE(res.betas[0][0] == Approx(1.0));
      REQUIRE(res.betas[0][1] == Approx(0.0));
      REQUIRE(res.betas[1][0] == Approx(1.0));
      REQUIRE(res.betas[1][1] == Approx(0.0));
      check_result(cat, res, {1, 1}, {2, 0}, b10, b10, 2, 1e-9);
      REQUIRE_FALSE(res.decomposition.empty());
      REQUIRE(res.decomposition[0].level == 0);
      REQUIRE(res.decomposition[0].size == 2);
      REQUIRE(res.decomposition[0].tuple.r() == 1);
    }
  }
  SECTION("the shrinking instance balances at a third of the way") {
    std::vector<Spectrum> bP{{1, 0}, {1, 0}}, bPP{{0, 0}, {1, 0}};
    auto res = interpolate(cat, {0, 0}, {2, 0}, bP, bPP, 2);
    REQUIRE(res.alpha[0] == Approx(4.0 / 3.0));
    REQUIRE(res.alpha[1] == Approx(0.0).margin(1e-12));
    REQUIRE(res.betas[0][0] == Approx(1.0 / 3.0));
    REQUIRE(res.betas[1][0] == Approx(1.0));
    check_result(cat, res, {0, 0}, {2, 0}, bP, bPP, 2, 1e-9);
  }
  SECTION("an infeasible hypothesis is rejected") {
    REQUIRE_THROWS_AS(interpolate(cat, {3, 0}, {3, 0}, b10, b10, 2), std::invalid_argument);
  }
}

TEST_CASE("integer walk takes unit steps and stays exact") {
  HornCatalog cat(2);
  std::vector<Spectrum> bP{{1, 0}, {1, 0}}, bPP{{0, 0}, {1, 0}};
  auto res = interpolate(cat, {0, 0}, {2, 0}, bP, bPP, 2, true);
  REQUIRE(integral(res.alpha));
  for (const auto& b : res.betas) REQUIRE(integral(b));
  REQUIRE(trace_gap(res.alpha, res.betas) == 0.0);
  check_result(cat, res, {0, 0}, {2, 0}, bP, bPP, 2, 0.0);

  // unit progress: number of walk steps is bounded by the initial L1 distance
  int steps = 0;
  for (const auto& line : res.steps)
    if (line.find(": step ") != std::string::npos) ++steps;
  REQUIRE(steps == 2);
  REQUIRE(res.decomposition[0].walk_steps == 2);
}

TEST_CASE("random integer instances from commuting sums") {
  std::mt19937 rng(7201);
  std::uniform_int_distribution<int> entry(0, 6), dim(3, 4);
  HornCatalog cat(2);
  for (int rep = 0; rep < 30; ++rep) {
    int N = dim(rng);
    Spectrum beta, gamma;
    for (int i = 0; i < N; ++i) {
      beta.push_back(entry(rng));
      gamma.push_back(entry(rng));
    }
    std::sort(beta.rbegin(), beta.rend());
    std::sort(gamma.rbegin(), gamma.rend());
    Spectrum alpha(beta);
    for (int i = 0; i < N; ++i) alpha[i] += gamma[i];
    std::sort(alpha.rbegin(), alpha.rend());

    Spectrum aP = alpha, aPP = alpha;
    aP.back() -= 1;   // widen the corridor one unit on each side
    aPP.front() += 1;
    std::vector<Spectrum> bs{beta, gamma};
    auto res = interpolate(cat, aP, aPP, bs, bs, N, true);
    REQUIRE(integral(res.alpha));
    REQUIRE(trace_gap(res.alpha, res.betas) == 0.0);
    REQUIRE(res.betas == bs);  // fixed bounds pinch the summands
    check_result(cat, res, aP, aPP, bs, bs, N, 0.0);

    auto real_res = interpolate(cat, aP, aPP, bs, bs, N, false);
    check_result(cat, real_res, aP, aPP, bs, bs, N, 1e-9);
  }
}

TEST_CASE("decreasing rearrangement preserves betweenness") {
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 50; ++rep) {
    int N = 1 + static_cast<int>(rng() % 7);
    Spectrum a(N), b(N), mid(N);
    for (int i = 0; i < N; ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
    }
    std::sort(a.rbegin(), a.rend());
    std::sort(b.rbegin(), b.rend());
    for (int i = 0; i < N; ++i) {
      double lo = std::min(a[i], b[i]), hi = std::max(a[i], b[i]);
      mid[i] = lo + (hi - lo) * std::uniform_real_distribution<double>(0, 1)(rng);
    }
    std::sort(mid.rbegin(), mid.rend());
    REQUIRE(is_between(mid, a, b, 1e-12));
  }
}

TEST_CASE("truncation windows of two-sided data") {
  SECTION("pinned three-point window") {
    TwoSidedSpectrum alpha{{5}, {-3, -1}};
    std::vector<TwoSidedSpectrum> betas{{{1}, {}}, {{1}, {}}};
    auto inst = truncate_pad(alpha, betas, 1);
    REQUIRE(inst.N == 3);
    REQUIRE(inst.alphaP == Spectrum{5, -1, -3});
    REQUIRE(inst.alphaPP == Spectrum{5, 0, -3});
    REQUIRE(inst.betasP[0] == Spectrum{1, 0, 0});
    REQUIRE(inst.betasPP[0] == Spectrum{1, 0, 0});
  }
  SECTION("zero data windows to zero") {
    auto inst = truncate_pad({{}, {}}, {{{}, {}}, {{}, {}}}, 2);
    REQUIRE(inst.alphaP == Spectrum(6, 0.0));
    REQUIRE(inst.alphaPP == Spectrum(6, 0.0));
  }
  SECTION("harmonic windows satisfy the interpolation hypothesis") {
    HornCatalog cat(2);
    TwoSidedSpectrum alpha{harmonic(6), {}};
    std::vector<TwoSidedSpectrum> betas{{harmonic(6, 0.5), {}}, {harmonic(6, 0.5), {}}};
    auto inst = truncate_pad(alpha, betas, 2);
    REQUIRE(scan_finite(cat, inst.alphaP, inst.betasP, inst.N).empty());
    REQUIRE(scan_finite_reverse(cat, inst.alphaPP, inst.betasPP, inst.N).empty());
  }
}

TEST_CASE("two-sided realization") {
  HornCatalog cat(2);

  SECTION("zero input gives zero output") {
    auto res = realize_two_sided(cat, {{}, {}}, {{{}, {}}, {{}, {}}}, 1);
    REQUIRE(res.alpha == Spectrum(3, 0.0));
  }
  SECTION("a single summand is recovered exactly") {
    HornCatalog cat1(1);
    auto res = realize_two_sided(cat1, {{1}, {}}, {{{1}, {}}}, 1);
    REQUIRE(res.alpha == Spectrum{1, 0});
    REQUIRE(res.betas[0] == Spectrum{1, 0});
  }
  SECTION("the harmonic triple matches its targets through the window") {
    TwoSidedSpectrum alpha{harmonic(6), {}};
    std::vector<TwoSidedSpectrum> betas{{harmonic(6, 0.5), {}}, {harmonic(6, 0.5), {}}};
    auto res = realize_two_sided(cat, alpha, betas, 2);
    REQUIRE(res.alpha[0] == Approx(1.0));
    REQUIRE(res.alpha[1] == Approx(0.5));
    for (int k = 0; k < 2; ++k) {
      REQUIRE(res.betas[k][0] == Approx(0.5));
      REQUIRE(res.betas[k][1] == Approx(0.25));
    }
    REQUIRE(std::abs(trace_gap(res.alpha, res.betas)) <= 1e-9);
    REQUIRE(scan_finite(cat, res.alpha, res.betas, 6).empty());
  }
  SECTION("successive windows drift less and less") {
    HornCatalog wide(2, CatalogLimits{.max_n_m2 = 9});
    TwoSidedSpectrum alpha{harmonic(9), {}};
    std::vector<TwoSidedSpectrum> betas{{harmonic(9, 0.5), {}}, {harmonic(9, 0.5), {}}};
    std::vector<InterpolationResult> out;
    for (int n = 1; n <= 3; ++n) out.push_back(realize_two_sided(wide, alpha, betas, n));
    auto dist = [](const InterpolationResult& a, const InterpolationResult& b) {
      double d = 0;
      for (std::size_t i = 0; i < a.alpha.size(); ++i)
        d = std::max(d, std::abs(a.alpha[i] - b.alpha[i]));
      for (std::size_t k = 0; k < a.betas.size(); ++k)
        for (std::size_t i = 0; i < a.betas[k].size(); ++i)
          d = std::max(d, std::abs(a.betas[k][i] - b.betas[k][i]));
      return d;
    };
    double d1 = dist(out[0], out[1]);
    double d2 = dist(out[1], out[2]);
    REQUIRE(d1 >= d2 - 1e-12);
  }
  SECTION("an infeasible two-sided triple propagates the rejection") {
    REQUIRE_THROWS_AS(
        realize_two_sided(cat, {{3}, {}}, {{{1}, {}}, {{1}, {}}}, 1),
        std::invalid_argument);
  }
}
