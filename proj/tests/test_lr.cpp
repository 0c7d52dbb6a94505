#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "horn/lr.hpp"

using horn::Partition;
using horn::lr_coeff;
using horn::multi_lr_coeff;

namespace {

std::vector<Partition> partitions_of(int n) {
  std::vector<Partition> out;
  std::vector<int> cur;
  auto dfs = [&](auto&& self, int left, int maxpart) -> void {
    if (left == 0) {
      out.emplace_back(cur);
      return;
    }
    for (int v = std::min(left, maxpart); v >= 1; --v) {
      cur.push_back(v);
      self(self, left - v, v);
      cur.pop_back();
    }
  };
  dfs(dfs, n, n);
  return out;
}

}  // namespace

TEST_CASE("lr_coeff pinned values") {
  CHECK(lr_coeff(Partition{2, 1}, Partition{2, 1}, Partition{}) == 1);
  CHECK(lr_coeff(Partition{3, 2, 2}, Partition{3, 2, 2}, Partition{}) == 1);
  CHECK(lr_coeff(Partition{2, 1}, Partition{1}, Partition{1, 1}) == 1);
  CHECK(lr_coeff(Partition{3}, Partition{1}, Partition{1, 1}) == 0);
  CHECK(lr_coeff(Partition{2, 2}, Partition{2, 1}, Partition{1}) == 1);
  // weight grading
  CHECK(lr_coeff(Partition{3, 1}, Partition{1}, Partition{1}) == 0);
  CHECK(lr_coeff(Partition{1}, Partition{1}, Partition{1}) == 0);
}

TEST_CASE("square of the hook (2,1)") {
  // s_21 * s_21 = s_42 + s_411 + s_33 + 2 s_321 + s_3111 + s_222 + s_2211
  const Partition h{2, 1};
  CHECK(lr_coeff(Partition{4, 2}, h, h) == 1);
  CHECK(lr_coeff(Partition{4, 1, 1}, h, h) == 1);
  CHECK(lr_coeff(Partition{3, 3}, h, h) == 1);
  CHECK(lr_coeff(Partition{3, 2, 1}, h, h) == 2);
  CHECK(lr_coeff(Partition{3, 1, 1, 1}, h, h) == 1);
  CHECK(lr_coeff(Partition{2, 2, 2}, h, h) == 1);
  CHECK(lr_coeff(Partition{2, 2, 1, 1}, h, h) == 1);
  CHECK(lr_coeff(Partition{4, 1}, h, h) == 0);
}

TEST_CASE("multi_lr_coeff pinned values") {
  CHECK(multi_lr_coeff(Partition{2, 1}, {Partition{1}, Partition{1}, Partition{1}}) == 2);
  CHECK(multi_lr_coeff(Partition{2}, {Partition{1}, Partition{1}}) == 1);
  CHECK(multi_lr_coeff(Partition{3, 2}, {Partition{3, 2}}) == 1);
  CHECK(multi_lr_coeff(Partition{}, {}) == 1);
  CHECK(multi_lr_coeff(Partition{1}, {}) == 0);
  // m = 3 cross-checked against the monomial oracle
  CHECK(multi_lr_coeff(Partition{2, 2}, {Partition{1}, Partition{1, 1}, Partition{1}}) ==
        horn::oracle::multi_lr_coeff_bruteforce(Partition{2, 2},
                                                {Partition{1}, Partition{1, 1}, Partition{1}}));
}

TEST_CASE("tableau counter agrees with the monomial oracle up to weight 6") {
  for (int n = 0; n <= 6; ++n) {
    auto lams = partitions_of(n);
    for (int a = 0; a <= n; ++a) {
      auto mus = partitions_of(a);
      auto nus = partitions_of(n - a);
      for (const auto& lam : lams)
        for (const auto& mu : mus)
          for (const auto& nu : nus) {
            long long fast = lr_coeff(lam, mu, nu);
            long long slow = horn::oracle::lr_coeff_bruteforce(lam, mu, nu);
            INFO(horn::to_string(lam) << " / " << horn::to_string(mu) << " * "
                                      << horn::to_string(nu));
            REQUIRE(fast == slow);
            REQUIRE(fast == lr_coeff(lam, nu, mu));  // symmetry in the factors
          }
    }
  }
}

TEST_CASE("multi_lr agrees with the monomial oracle on three factors") {
  // all factor triples with total weight 4, all targets of weight 4
  auto targets = partitions_of(4);
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b) {
      int c = 4 - a - b;
      for (const auto& f1 : partitions_of(a))
        for (const auto& f2 : partitions_of(b))
          for (const auto& f3 : partitions_of(c))
            for (const auto& t : targets) {
              std::vector<Partition> fs{f1, f2, f3};
              INFO(horn::to_string(t));
              REQUIRE(multi_lr_coeff(t, fs) ==
                      horn::oracle::multi_lr_coeff_bruteforce(t, fs));
            }
    }
}
