#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "horn/hive.hpp"

using namespace horn;

namespace {

double alpha_tilde(int i) { return 1.0 / (i + 2); }
double beta_tilde(int j) { return 1.0 / (2.0 * (j + 1)); }

std::vector<double> seq(int n, double (*fn)(int)) {
  std::vector<double> v;
  for (int i = 1; i <= n; ++i) v.push_back(fn(i));
  return v;
}

std::vector<std::vector<double>> z_tilde_grid(int W, int H) {
  std::vector<std::vector<double>> z(W, std::vector<double>(H));
  for (int i = 1; i <= W; ++i)
    for (int j = 1; j <= H; ++j)
      z[i - 1][j - 1] = 0.5 * (1.0 / (i + j + 1) - 1.0 / (i + 1));
  return z;
}

}  // namespace

TEST_CASE("edge differences around a vertex cancel") {
  Hive h = example_hive(6, 5);
  for (int i = 1; i <= h.width(); ++i)
    for (int j = 1; j <= h.height(); ++j)
      REQUIRE(std::abs(h.x(i, j) + h.y(i, j) + h.z(i, j)) < 1e-15);
}

TEST_CASE("accessor ranges and undefined points are enforced") {
  Hive h(2, 2);
  REQUIRE_FALSE(h.is_defined(0, 0));
  REQUIRE_THROWS_AS(h.f(0, 0), std::invalid_argument);
  REQUIRE_THROWS_AS(h.f(3, 0), std::out_of_range);
  h.set_f(0, 0, 1.0);
  REQUIRE(h.f(0, 0) == 1.0);
  REQUIRE_THROWS_AS(h.x(0, 1), std::out_of_range);
  REQUIRE_THROWS_AS(h.x(1, 4), std::out_of_range);
  REQUIRE_THROWS_AS(h.z(1, 3), std::out_of_range);
  REQUIRE_THROWS_AS(Hive(0, 2), std::invalid_argument);
}

TEST_CASE("affine grids have zero rhombus slack") {
  Hive h = Hive::from_function(4, 3, [](int i, int j) { return 2.0 * i - 3.0 * j + 1.0; });
  for (const auto& s : rhombus_slacks(h)) REQUIRE(std::abs(s.slack) < 1e-12);
  REQUIRE(min_rhombus_slack(h) > -1e-12);
}

TEST_CASE("separable quadratic grid pins the three slack families") {
  Hive h = Hive::from_function(5, 4, [](int i, int j) { return -(i * i + j * j) / 2.0; });
  auto slacks = rhombus_slacks(h);
  REQUIRE_FALSE(slacks.empty());
  for (const auto& s : slacks) {
    double expect = (s.family == 1) ? 0.0 : 1.0;
    REQUIRE(std::abs(s.slack - expect) < 1e-12);
  }
}

TEST_CASE("example hive matches its closed-form boundary and slacks") {
  const int W = 12, H = 12;
  Hive h = example_hive(W, H);

  REQUIRE(std::abs(h.f(0, 0)) < 1e-15);
  REQUIRE(std::abs(h.z(1, 1) - (-1.0 / 12.0)) < 1e-15);
  for (int i = 1; i <= W; ++i) REQUIRE(std::abs(h.x(i, 1) - alpha_tilde(i)) < 1e-14);
  for (int j = 1; j <= H; ++j) REQUIRE(std::abs(h.y(1, j) + beta_tilde(j)) < 1e-14);
  for (int i = 1; i <= W; ++i)
    for (int j = 1; j <= H; ++j)
      REQUIRE(std::abs(h.z(i, j) - 0.5 * (1.0 / (i + j + 1) - 1.0 / (i + 1))) < 1e-14);

  // window-edge gap: z(i,H) sits exactly 1/(2(i+H+1)) above -gamma_i
  for (int i = 1; i <= W; ++i)
    REQUIRE(std::abs(h.z(i, H) + beta_tilde(i) - 0.5 / (i + H + 1)) < 1e-14);

  for (const auto& s : rhombus_slacks(h)) {
    double u = s.i + s.j;
    double expect = 0.0;
    switch (s.family) {
      case 1: expect = s.i / (u * (u + 1) * (u + 2)); break;
      case 2: expect = 0.5 * (1.0 / ((s.i + 1.0) * (s.i + 2.0)) - 1.0 / ((u + 1) * (u + 2))); break;
      case 3: expect = 0.5 / ((u + 1) * (u + 2)); break;
    }
    REQUIRE(std::abs(s.slack - expect) < 1e-13);
    REQUIRE(s.slack >= 0.0);
  }
}

TEST_CASE("reconstruction fills what the data reaches and no more") {
  SECTION("1x1 grid leaves the far corner open") {
    Hive h = hive_reconstruct({1.0}, {1.0}, {{0.0}});
    REQUIRE(h.f(1, 0) == 1.0);
    REQUIRE(h.f(0, 1) == 1.0);
    REQUIRE_FALSE(h.is_defined(1, 1));
    REQUIRE(h.reconstruction_residual == 0.0);
  }
  SECTION("contradictory z is rejected") {
    REQUIRE_THROWS_AS(hive_reconstruct({1.0}, {1.0}, {{5.0}}), InconsistentDataError);
  }
  SECTION("bad grid shapes are rejected") {
    REQUIRE_THROWS_AS(hive_reconstruct({1.0}, {1.0}, {{0.0}, {0.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(hive_reconstruct({1.0}, {1.0, 0.5}, {{0.0}}), std::invalid_argument);
  }
}

TEST_CASE("reconstructing from the example boundary reproduces the example hive") {
  const int W = 10, H = 10;
  Hive full = example_hive(W, H);
  Hive rebuilt = hive_reconstruct(seq(W, alpha_tilde), seq(H, beta_tilde), z_tilde_grid(W, H), 1e-11);
  REQUIRE(rebuilt.reconstruction_residual <= 1e-12);
  int covered = 0;
  for (int i = 0; i <= W; ++i)
    for (int j = 0; j <= H; ++j)
      if (rebuilt.is_defined(i, j)) {
        REQUIRE(std::abs(rebuilt.f(i, j) - full.f(i, j)) < 1e-12);
        ++covered;
      }
  REQUIRE(covered > 2 * (W + H));          // more than just the two edges
  REQUIRE_FALSE(rebuilt.is_defined(W, H)); // nothing reaches past the last anti-diagonal
}

TEST_CASE("continuous LR verification on the example data") {
  const int W = 12, H = 12;
  Hive h = example_hive(W, H);
  auto alpha = seq(W, alpha_tilde);
  auto beta = seq(H, beta_tilde);
  auto gamma = seq(W, beta_tilde);

  SECTION("the harmonic triple passes with the window-edge allowance") {
    double allowance = 0.5 / (H + 2) + 1e-12;
    auto rep = verify_continuous_lr(alpha, beta, gamma, h, 1e-9, allowance);
    REQUIRE(rep.pass);
    REQUIRE(rep.min_rhombus_slack >= 0.0);
    REQUIRE(rep.max_boundary_error <= 1e-13);
    REQUIRE(rep.tail_gap <= allowance);
    REQUIRE(rep.tail_gap >= 0.5 / (H + 3));  // the gap is genuinely of window size
  }
  SECTION("zero data passes trivially") {
    Hive z = Hive::from_function(3, 3, [](int, int) { return 0.0; });
    auto rep = verify_continuous_lr({0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, z, 1e-9);
    REQUIRE(rep.pass);
    REQUIRE(rep.tail_gap == 0.0);
  }
  SECTION("an interior bump breaks concavity") {
    Hive bumped = h;
    bumped.set_f(5, 5, bumped.f(5, 5) + 1.0);
    auto rep = verify_continuous_lr(alpha, beta, gamma, bumped, 1e-9);
    REQUIRE_FALSE(rep.pass);
    REQUIRE(rep.min_rhombus_slack < -0.5);
  }
  SECTION("alpha must dominate beta") {
    REQUIRE_THROWS_AS(verify_continuous_lr(beta, alpha, gamma, h, 1e-9), std::invalid_argument);
  }
}
