#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "horn/witness.hpp"

using namespace horn;
using Catch::Approx;

namespace {

Eigen::MatrixXcd diag(const Spectrum& s) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<int>(s.size()), static_cast<int>(s.size()));
  for (int i = 0; i < M.rows(); ++i) M(i, i) = s[static_cast<std::size_t>(i)];
  return M;
}

Eigen::MatrixXcd haarish_unitary(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = std::complex<double>(g(rng), g(rng));
  return Eigen::HouseholderQR<Eigen::MatrixXcd>(z).householderQ();
}

Spectrum random_decreasing(std::mt19937& rng, int n, int lo, int hi) {
  std::uniform_int_distribution<int> entry(lo, hi);
  Spectrum v;
  for (int i = 0; i < n; ++i) v.push_back(entry(rng));
  std::sort(v.rbegin(), v.rend());
  return v;
}

Spectrum eigenvalues_desc(const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  Spectrum v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.rbegin(), v.rend());
  return v;
}

// Feasible instance realized by an actual random sum, so a witness exists in
// generic position.
struct Instance {
  Spectrum alpha;
  std::vector<Spectrum> betas;
};

Instance random_sum_instance(std::mt19937& rng, int n, int m) {
  Instance inst;
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < m; ++k) {
    Spectrum b;
    for (int i = 0; i < n; ++i) b.push_back(entry(rng));
    std::sort(b.rbegin(), b.rend());
    Eigen::MatrixXcd u = haarish_unitary(n, rng);
    sum += u * diag(b) * u.adjoint();
    inst.betas.push_back(b);
  }
  inst.alpha = eigenvalues_desc(sum);
  return inst;
}

}  // namespace

TEST_CASE("two-sided eigenvalue split of a matrix", "[witness]") {
  REQUIRE(lambda0_of_matrix(diag({2, 0, -3})).pos == std::vector<double>{2});
  REQUIRE(lambda0_of_matrix(diag({2, 0, -3})).neg == std::vector<double>{-3});
  REQUIRE(lambda0_of_matrix(Eigen::MatrixXcd::Zero(3, 3)).pos.empty());
  REQUIRE(lambda0_of_matrix(Eigen::MatrixXcd::Zero(3, 3)).neg.empty());

  auto l = lambda0_of_matrix(diag({1, 1, -1}));
  REQUIRE(l.pos == std::vector<double>{1, 1});
  REQUIRE(l.neg == std::vector<double>{-1});
  REQUIRE(l.at(2) == 1.0);
  REQUIRE(l.at(-1) == -1.0);
  REQUIRE(l.at(-2) == 0.0);

  std::mt19937 rng(7);
  Eigen::MatrixXcd u = haarish_unitary(3, rng);
  auto rotated = lambda0_of_matrix(Eigen::MatrixXcd(u * diag({5, -2, 0}) * u.adjoint()));
  REQUIRE(rotated.pos.size() == 1);
  REQUIRE(rotated.pos[0] == Approx(5).margin(1e-12));
  REQUIRE(rotated.neg[0] == Approx(-2).margin(1e-12));

  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
  bad(0, 1) = 1.0;
  REQUIRE_THROWS_AS(lambda0_of_matrix(bad), std::invalid_argument);
}

TEST_CASE("synthesis of witness triples", "[witness]") {
  HornCatalog cat(2);

  SECTION("one dimension is exact immediately") {
    WitnessSet w = synthesize(cat, {5}, {{2}, {3}});
    REQUIRE(w.converged);
    REQUIRE(w.iterations == 1);
    REQUIRE(w.sum_residual <= 1e-14);
    REQUIRE(std::abs(w.B[0](0, 0) - 2.0) <= 1e-14);
  }

  SECTION("commuting targets get the diagonal witness immediately") {
    WitnessSet w = synthesize(cat, {2, 0}, {{1, 0}, {1, 0}});
    REQUIRE(w.converged);
    REQUIRE(w.iterations == 1);
    REQUIRE(w.sum_residual <= 1e-14);
    REQUIRE((w.B[0] - diag({1, 0})).norm() <= 1e-14);
  }

  SECTION("rotated targets converge and report honestly") {
    WitnessSet w = synthesize(cat, {1, 1}, {{1, 0}, {1, 0}});
    REQUIRE(w.converged);
    REQUIRE(w.sum_residual <= 1e-8);
    REQUIRE(w.spectrum_errors[0] <= 1e-10);
    REQUIRE(w.spectrum_errors[1] <= 1e-10);
    // recomputation agrees with the reported residual
    Eigen::MatrixXcd gap = w.A - w.B[0] - w.B[1];
    REQUIRE(gap.norm() == Approx(w.sum_residual).margin(1e-13));
  }

  SECTION("identity split forces orthogonal rank-one summands") {
    WitnessSet w = synthesize(cat, {1, 1}, {{1, 0}, {1, 0}});
    REQUIRE(w.converged);
    REQUIRE((w.B[0] * w.B[1]).norm() <= 1e-7);
  }

  SECTION("infeasible targets are rejected up front") {
    REQUIRE_THROWS_AS(synthesize(cat, {3, 1}, {{1, 1}, {1, 1}}), std::invalid_argument);
    REQUIRE_THROWS_AS(synthesize(cat, {3, 0}, {{1, 0}, {1, 0}}), std::invalid_argument);

    SynthesisOptions opts;
    opts.skip_feasibility_check = true;
    opts.max_iter = 300;
    opts.restarts = 2;
    WitnessSet w = synthesize(cat, {3, 1}, {{1, 1}, {1, 1}}, opts);
    REQUIRE_FALSE(w.converged);
    REQUIRE(w.sum_residual > 1e-3);  // best effort reported, no feasibility claim
    REQUIRE(w.spectrum_errors[0] <= 1e-10);
  }

  SECTION("random feasible targets: convergence and soundness of scans") {
    std::mt19937 rng(24601);
    for (int rep = 0; rep < 10; ++rep) {
      int n = 2 + rep % 3;
      Instance inst = random_sum_instance(rng, n, 2);
      WitnessSet w = synthesize(cat, inst.alpha, inst.betas);
      REQUIRE(w.converged);
      REQUIRE(w.sum_residual <= 1e-8);
      for (double e : w.spectrum_errors) REQUIRE(e <= 1e-7);

      // every two-sided record holds on the realized spectra
      TwoSidedSpectrum a0 = lambda0_of_matrix(w.A);
      std::vector<TwoSidedSpectrum> b0s;
      for (const auto& B : w.B) b0s.push_back(lambda0_of_matrix(B));
      ScanOptions sopts;
      sopts.tol = 1e-7;
      REQUIRE(scan_extended(cat, a0, b0s, std::min(n, 3), sopts).empty());
    }
  }

  SECTION("tight-record target with no commuting witness converges via block split") {
    // alpha_1 + alpha_2 = beta_1 + beta_2 summed over all three summands is
    // tight, and no slotwise diagonal arrangement reproduces alpha, so the
    // plain alternating loop stalls around 1e-4 here; the witness must come
    // from realizing the 2 + 1 blocks separately.
    HornCatalog cat3(3);
    Spectrum alpha = {4, -3, -7};
    std::vector<Spectrum> betas = {{3, -1, -2}, {2, -2, -3}, {1, -2, -2}};
    WitnessSet w = synthesize(cat3, alpha, betas);
    REQUIRE(w.converged);
    REQUIRE(w.sum_residual <= 1e-8);
    for (double e : w.spectrum_errors) REQUIRE(e <= 1e-7);
    for (int i = 0; i < 3; ++i) REQUIRE(w.A(i, i) == alpha[static_cast<std::size_t>(i)]);
  }
}

TEST_CASE("compression and interlacing", "[witness]") {
  WitnessSet w;
  w.A = diag({3, 1, -2});
  w.B = {diag({2, 1, -1}), diag({1, 0, -1})};

  SECTION("full and zero projectors") {
    auto full = compress(w, Eigen::MatrixXcd::Identity(3, 3));
    REQUIRE(full.alpha.pos == std::vector<double>{3, 1});
    REQUIRE(full.alpha.neg == std::vector<double>{-2});
    REQUIRE(full.interlacing);
    REQUIRE(full.worst_gap == 0.0);

    auto empty = compress(w, Eigen::MatrixXcd::Zero(3, 3));
    REQUIRE(empty.alpha.pos.empty());
    REQUIRE(empty.betas[0].pos.empty());
    REQUIRE(empty.interlacing);
  }

  SECTION("random rank-two compression interlaces") {
    std::mt19937 rng(99);
    Eigen::MatrixXcd u = haarish_unitary(3, rng);
    Eigen::MatrixXcd P = u.leftCols(2) * u.leftCols(2).adjoint();
    auto rep = compress(w, P);
    REQUIRE(rep.interlacing);
    REQUIRE(rep.worst_gap >= -1e-10);
    REQUIRE(rep.alpha.pos.size() + rep.alpha.neg.size() <= 2);
    REQUIRE(rep.alpha.at(1) <= 3.0 + 1e-10);
    REQUIRE(rep.alpha.at(-1) >= -2.0 - 1e-10);
  }

  SECTION("non-projectors are rejected") {
    REQUIRE_THROWS_AS(compress(w, Eigen::MatrixXcd(2 * Eigen::MatrixXcd::Identity(3, 3))),
                      std::invalid_argument);
  }

  SECTION("a hundred random matrix and projection pairs") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> dim(2, 6);
    for (int rep = 0; rep < 100; ++rep) {
      int n = dim(rng);
      std::uniform_int_distribution<int> rank(0, n);
      WitnessSet single;
      Spectrum s = random_decreasing(rng, n, -3, 3);
      Eigen::MatrixXcd u = haarish_unitary(n, rng);
      single.A = u * diag(s) * u.adjoint();
      Eigen::MatrixXcd v = haarish_unitary(n, rng);
      int d = rank(rng);
      Eigen::MatrixXcd P = v.leftCols(d) * v.leftCols(d).adjoint();
      auto rep2 = compress(single, P);
      REQUIRE(rep2.worst_gap >= -1e-10);
    }
  }
}

TEST_CASE("reducing projector from a tight record", "[witness]") {
  HornCatalog cat(2);

  // heads of the motivating sequences, padded so the zero eigenvalue of the
  // summands is present: alpha = (1, 1/2, 0), beta = (1/2, 0, 0),
  // gamma = (1, 0, 0), tight at alpha_1 + alpha_2 = beta_1 + gamma_1.
  const Spectrum alpha{1.0, 0.5, 0.0}, beta{0.5, 0.0, 0.0}, gamma{1.0, 0.0, 0.0};
  const HornTuple t(3, IndexSet({3}), {IndexSet({2}), IndexSet({2})});

  SECTION("block-diagonal witness recovers the projector exactly") {
    WitnessSet w;
    w.B = {diag({0.5, 0, 0}), diag({0, 1, 0})};
    w.A = w.B[0] + w.B[1];
    InequalityRecord rec = eval_reverse_positive(t, {1, 1}, alpha, {beta, gamma});
    REQUIRE(rec.tight(1e-12));

    ReducingReport rep = detect_reducing(w, rec);
    REQUIRE(rep.within_tol);
    REQUIRE(rep.rank == 2);
    REQUIRE(rep.commutator_A <= 1e-12);
    REQUIRE(rep.commutator_B[0] <= 1e-12);
    REQUIRE(rep.commutator_B[1] <= 1e-12);
    REQUIRE(rep.compressed_alpha[0] == Approx(1.0).margin(1e-12));
    REQUIRE(rep.compressed_alpha[1] == Approx(0.5).margin(1e-12));
    REQUIRE(rep.compressed_betas[0][0] == Approx(0.5).margin(1e-12));
    REQUIRE(rep.compressed_betas[0][1] == Approx(0.0).margin(1e-12));
    REQUIRE(rep.compressed_betas[1][0] == Approx(1.0).margin(1e-12));
    REQUIRE(rep.compressed_betas[1][1] == Approx(0.0).margin(1e-12));
    REQUIRE(rep.expected_alpha == Spectrum{1.0, 0.5});
    REQUIRE(rep.expected_betas[0] == Spectrum{0.5, 0.0});
    REQUIRE(rep.expected_betas[1] == Spectrum{1.0, 0.0});
  }

  SECTION("rotated witness recovers the same compressions") {
    std::mt19937 rng(808);
    Eigen::MatrixXcd u = haarish_unitary(3, rng);
    WitnessSet w;
    w.B = {u * diag({0.5, 0, 0}) * u.adjoint(), u * diag({0, 1, 0}) * u.adjoint()};
    w.A = w.B[0] + w.B[1];
    InequalityRecord rec = eval_reverse_positive(t, {1, 1}, alpha, {beta, gamma});

    ReducingReport rep = detect_reducing(w, rec, 1e-9);
    REQUIRE(rep.within_tol);
    REQUIRE(rep.commutator_A <= 1e-9);
    REQUIRE(rep.commutator_B[0] <= 1e-9);
    REQUIRE(rep.commutator_B[1] <= 1e-9);
    REQUIRE(rep.compressed_alpha[0] == Approx(1.0).margin(1e-9));
    REQUIRE(rep.compressed_alpha[1] == Approx(0.5).margin(1e-9));
    REQUIRE(rep.compressed_betas[0][0] == Approx(0.5).margin(1e-9));
    REQUIRE(rep.compressed_betas[1][0] == Approx(1.0).margin(1e-9));
    // idempotent Hermitian projector
    REQUIRE((rep.P * rep.P - rep.P).norm() <= 1e-12);
    REQUIRE((rep.P - rep.P.adjoint()).norm() <= 1e-12);
  }

  SECTION("a loose record is a precondition error") {
    // the witness drifted away from the targets the record was tight on
    WitnessSet w;
    w.B = {diag({0.5, 0.4, 0}), diag({0, 1, 0.3})};
    w.A = w.B[0] + w.B[1];
    InequalityRecord rec = eval_reverse_positive(t, {1, 1}, alpha, {beta, gamma});
    REQUIRE(rec.tight(1e-12));
    REQUIRE_THROWS_AS(detect_reducing(w, rec), std::invalid_argument);
  }

  SECTION("degenerate eigenspace of A needs the refinement") {
    std::mt19937 rng(313);
    Eigen::MatrixXcd u = haarish_unitary(3, rng);
    WitnessSet w;
    w.B = {u * diag({1, 0, 0}) * u.adjoint(), u * diag({0, 1, 0}) * u.adjoint()};
    w.A = w.B[0] + w.B[1];  // spectrum (1, 1, 0), top eigenspace two-dimensional

    // alpha_2 = beta_2 + gamma_1 is tight: 1 = 0 + 1
    HornTuple t2(3, IndexSet({2}), {IndexSet({2}), IndexSet({1})});
    InequalityRecord rec = eval_horn(t2, {1, 1, 0}, {{1, 0, 0}, {1, 0, 0}});
    REQUIRE(rec.tight(1e-12));

    ReducingReport rep = detect_reducing(w, rec, 1e-8, 5);
    REQUIRE(rep.within_tol);
    REQUIRE(rep.rank == 1);
    REQUIRE(rep.commutator_B[0] <= 1e-8);
    REQUIRE(rep.commutator_B[1] <= 1e-8);
    REQUIRE(rep.compressed_alpha[0] == Approx(1.0).margin(1e-8));
    REQUIRE(rep.compressed_betas[0][0] == Approx(0.0).margin(1e-8));
    REQUIRE(rep.compressed_betas[1][0] == Approx(1.0).margin(1e-8));
  }

  SECTION("two-sided record with a genuinely negative read") {
    std::mt19937 rng(117);
    Eigen::MatrixXcd u = haarish_unitary(2, rng);
    WitnessSet w;
    w.B = {u * diag({1, -3}) * u.adjoint(), u * diag({0.5, 1}) * u.adjoint()};
    w.A = w.B[0] + w.B[1];  // spectrum (1.5, -2)

    HornTuple t2(2, IndexSet({2}), {IndexSet({2}), IndexSet({1})});
    InequalityRecord rec = eval_extended(t2, {1, 0}, lambda0_of_matrix(w.A),
                                         {lambda0_of_matrix(w.B[0]), lambda0_of_matrix(w.B[1])});
    REQUIRE(rec.tight(1e-12));  // alpha_{-1} = beta_{-1} + gamma_1

    ReducingReport rep = detect_reducing(w, rec, 1e-9);
    REQUIRE(rep.within_tol);
    REQUIRE(rep.rank == 1);
    REQUIRE(rep.compressed_alpha[0] == Approx(-2.0).margin(1e-9));
    REQUIRE(rep.compressed_betas[0][0] == Approx(-3.0).margin(1e-9));
    REQUIRE(rep.compressed_betas[1][0] == Approx(1.0).margin(1e-9));
  }

  SECTION("two-sided record reading a zero eigenvalue") {
    std::mt19937 rng(2718);
    Eigen::MatrixXcd u = haarish_unitary(2, rng);
    WitnessSet w;
    w.B = {u * diag({1, 0}) * u.adjoint(), Eigen::MatrixXcd::Zero(2, 2)};
    w.A = w.B[0];

    HornTuple t2(2, IndexSet({2}), {IndexSet({2}), IndexSet({1})});
    InequalityRecord rec = eval_extended(t2, {1, 0}, lambda0_of_matrix(w.A),
                                         {lambda0_of_matrix(w.B[0]), lambda0_of_matrix(w.B[1])});
    REQUIRE(rec.tight(1e-12));  // 0 = 0 + 0 through the wrapped reads

    ReducingReport rep = detect_reducing(w, rec, 1e-10);
    REQUIRE(rep.within_tol);
    REQUIRE(rep.rank == 1);
    REQUIRE(rep.compressed_alpha[0] == Approx(0.0).margin(1e-10));
    REQUIRE(rep.compressed_betas[0][0] == Approx(0.0).margin(1e-10));
  }

  SECTION("records reaching past the witness dimension are rejected") {
    WitnessSet w;
    w.B = {diag({0.5, 0, 0}), diag({0, 1, 0})};
    w.A = w.B[0] + w.B[1];
    InequalityRecord rec = eval_reverse_positive(t, {2, 1}, alpha, {beta, gamma});
    REQUIRE(rec.tight(1e-12));  // reads alpha_4 = 0 past the matrix
    REQUIRE_THROWS_AS(detect_reducing(w, rec), std::invalid_argument);
  }
}
