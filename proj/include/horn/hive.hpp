#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "horn/errors.hpp"
#include "horn/spectrum.hpp"

namespace horn {

// Concave grid function on [0,W] x [0,H] with the three edge differences.
// Points may be individually undefined (reconstruction cannot always reach
// the far anti-diagonals); every accessor that touches an undefined point
// throws rather than inventing a value.
class Hive {
public:
  Hive(int width, int height)
      : W_(width), H_(height),
        values_(static_cast<std::size_t>((width + 1) * (height + 1)), 0.0),
        defined_(static_cast<std::size_t>((width + 1) * (height + 1)), 0) {
    if (width < 1 || height < 1) throw std::invalid_argument("Hive: extents must be >= 1");
  }

  template <typename F>
  static Hive from_function(int width, int height, F&& fn) {
    Hive h(width, height);
    for (int i = 0; i <= width; ++i)
      for (int j = 0; j <= height; ++j) h.set_f(i, j, fn(i, j));
    return h;
  }

  int width() const { return W_; }
  int height() const { return H_; }

  bool is_defined(int i, int j) const { return defined_[idx(i, j)] != 0; }

  double f(int i, int j) const {
    std::size_t k = idx(i, j);
    if (!defined_[k])
      throw std::invalid_argument("Hive: f(" + std::to_string(i) + "," + std::to_string(j) +
                                  ") is undefined");
    return values_[k];
  }

  void set_f(int i, int j, double v) {
    std::size_t k = idx(i, j);
    values_[k] = v;
    defined_[k] = 1;
  }

  // x_{ij} = f(i,j-1) - f(i-1,j-1), 1 <= i <= W, 1 <= j <= H+1
  double x(int i, int j) const {
    if (i < 1 || i > W_ || j < 1 || j > H_ + 1) throw std::out_of_range("Hive::x out of range");
    return f(i, j - 1) - f(i - 1, j - 1);
  }

  // y_{ij} = f(i-1,j-1) - f(i-1,j), 1 <= i <= W+1, 1 <= j <= H
  double y(int i, int j) const {
    if (i < 1 || i > W_ + 1 || j < 1 || j > H_) throw std::out_of_range("Hive::y out of range");
    return f(i - 1, j - 1) - f(i - 1, j);
  }

  // z_{ij} = f(i-1,j) - f(i,j-1), 1 <= i <= W, 1 <= j <= H
  double z(int i, int j) const {
    if (i < 1 || i > W_ || j < 1 || j > H_) throw std::out_of_range("Hive::z out of range");
    return f(i - 1, j) - f(i, j - 1);
  }

  bool z_defined(int i, int j) const {
    return is_defined(i - 1, j) && is_defined(i, j - 1);
  }

  // largest disagreement seen among over-determined points during reconstruction
  double reconstruction_residual = 0.0;

private:
  std::size_t idx(int i, int j) const {
    if (i < 0 || i > W_ || j < 0 || j > H_) throw std::out_of_range("Hive: point out of range");
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(H_ + 1) +
           static_cast<std::size_t>(j);
  }

  int W_, H_;
  std::vector<double> values_;
  std::vector<char> defined_;
};

struct RhombusSlack {
  int family;  // 1, 2 or 3, matching the three reflection directions
  int i, j;
  double slack;
};

// Concavity slacks of the piecewise-affine interpolant across interior edges.
// Slacks touching undefined points are skipped.
inline std::vector<RhombusSlack> rhombus_slacks(const Hive& h) {
  std::vector<RhombusSlack> out;
  auto all_defined = [&](std::initializer_list<std::pair<int, int>> pts) {
    for (auto [a, b] : pts)
      if (!h.is_defined(a, b)) return false;
    return true;
  };
  for (int i = 1; i <= h.width(); ++i)
    for (int j = 1; j <= h.height(); ++j) {
      if (all_defined({{i - 1, j}, {i, j - 1}, {i - 1, j - 1}, {i, j}}))
        out.push_back({1, i, j, h.f(i - 1, j) + h.f(i, j - 1) - h.f(i - 1, j - 1) - h.f(i, j)});
      if (i + 1 <= h.width() && all_defined({{i, j}, {i, j - 1}, {i - 1, j}, {i + 1, j - 1}}))
        out.push_back({2, i, j, h.f(i, j) + h.f(i, j - 1) - h.f(i - 1, j) - h.f(i + 1, j - 1)});
      if (j + 1 <= h.height() && all_defined({{i - 1, j}, {i, j}, {i, j - 1}, {i - 1, j + 1}}))
        out.push_back({3, i, j, h.f(i - 1, j) + h.f(i, j) - h.f(i, j - 1) - h.f(i - 1, j + 1)});
    }
  return out;
}

inline double min_rhombus_slack(const Hive& h) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : rhombus_slacks(h)) m = std::min(m, s.slack);
  return m;
}

// Rebuild f from bottom-edge differences alpha, left-edge differences beta
// (as -y) and the z grid.  f(0,0) = 0.  Interior points come from the
// anti-diagonal relation f(i-1,j) = f(i,j-1) + z_{ij}, run to a fixpoint in
// both directions; points no chain reaches stay undefined.
inline Hive hive_reconstruct(const std::vector<double>& alpha, const std::vector<double>& beta,
                             const std::vector<std::vector<double>>& z, double tol = 1e-9) {
  int W = static_cast<int>(alpha.size());
  int H = static_cast<int>(beta.size());
  if (W < 1 || H < 1) throw std::invalid_argument("hive_reconstruct: need extents >= 1");
  if (static_cast<int>(z.size()) != W)
    throw std::invalid_argument("hive_reconstruct: z grid must have W rows");
  for (const auto& row : z)
    if (static_cast<int>(row.size()) != H)
      throw std::invalid_argument("hive_reconstruct: z grid must have H columns");

  Hive h(W, H);
  h.set_f(0, 0, 0.0);
  for (int i = 1; i <= W; ++i) h.set_f(i, 0, h.f(i - 1, 0) + alpha[static_cast<std::size_t>(i - 1)]);
  for (int j = 1; j <= H; ++j) h.set_f(0, j, h.f(0, j - 1) + beta[static_cast<std::size_t>(j - 1)]);

  double residual = 0.0;
  auto offer = [&](int i, int j, double v) {
    if (!h.is_defined(i, j)) {
      h.set_f(i, j, v);
      return true;
    }
    residual = std::max(residual, std::abs(h.f(i, j) - v));
    return false;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 1; i <= W; ++i)
      for (int j = 1; j <= H; ++j) {
        double zij = z[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
        if (h.is_defined(i, j - 1) && offer(i - 1, j, h.f(i, j - 1) + zij)) changed = true;
        if (h.is_defined(i - 1, j) && offer(i, j - 1, h.f(i - 1, j) - zij)) changed = true;
      }
  }
  if (residual > tol)
    throw InconsistentDataError("hive_reconstruct: boundary and z data disagree by " +
                                std::to_string(residual));
  h.reconstruction_residual = residual;
  return h;
}

// The explicit harmonic hive.  Prefix harmonic numbers are accumulated in
// long double so the boundary identities survive to around 1e-15 in double.
inline Hive example_hive(int W, int H) {
  if (W < 1 || H < 1) throw std::invalid_argument("example_hive: need extents >= 1");
  std::vector<long double> Hn(static_cast<std::size_t>(W + H + 3), 0.0L);
  for (std::size_t n = 1; n < Hn.size(); ++n) Hn[n] = Hn[n - 1] + 1.0L / static_cast<long double>(n);
  return Hive::from_function(W, H, [&](int i, int j) {
    long double v = Hn[static_cast<std::size_t>(i + j + 2)] - 1.5L +
                    static_cast<long double>(j) / (2.0L * (i + j + 2)) -
                    (Hn[static_cast<std::size_t>(i + j + 1)] - Hn[static_cast<std::size_t>(i + 1)]) / 2.0L;
    return static_cast<double>(v);
  });
}

struct ContinuousLrReport {
  double min_rhombus_slack = std::numeric_limits<double>::infinity();
  double max_boundary_error = 0.0;
  double tail_gap = 0.0;  // max_i |z(i,H) + gamma_i| at the window edge
  bool pass = false;
};

// Check a hive against the boundary data of a positive triple: bottom edge
// carries alpha, left edge carries beta (through -y), and the z values at the
// window edge must approach -gamma within the stated allowance.
inline ContinuousLrReport verify_continuous_lr(const Spectrum& alpha, const Spectrum& beta,
                                               const Spectrum& gamma, const Hive& h, double tol,
                                               double tail_allowance =
                                                   std::numeric_limits<double>::infinity()) {
  validate_decreasing(alpha, "alpha", tol);
  validate_decreasing(beta, "beta", tol);
  validate_decreasing(gamma, "gamma", tol);
  int span = static_cast<int>(std::max(alpha.size(), beta.size()));
  for (int i = 1; i <= span; ++i)
    if (spectrum_at(alpha, i) < spectrum_at(beta, i) - tol)
      throw std::invalid_argument("verify_continuous_lr: alpha must dominate beta entrywise");

  ContinuousLrReport rep;
  rep.min_rhombus_slack = min_rhombus_slack(h);
  for (int i = 1; i <= h.width(); ++i)
    if (h.is_defined(i, 0) && h.is_defined(i - 1, 0))
      rep.max_boundary_error =
          std::max(rep.max_boundary_error, std::abs(h.x(i, 1) - spectrum_at(alpha, i)));
  for (int j = 1; j <= h.height(); ++j)
    if (h.is_defined(0, j) && h.is_defined(0, j - 1))
      rep.max_boundary_error =
          std::max(rep.max_boundary_error, std::abs(h.y(1, j) + spectrum_at(beta, j)));
  for (int i = 1; i <= h.width(); ++i)
    if (h.z_defined(i, h.height()))
      rep.tail_gap = std::max(rep.tail_gap, std::abs(h.z(i, h.height()) + spectrum_at(gamma, i)));

  rep.pass = rep.min_rhombus_slack >= -tol && rep.max_boundary_error <= tol &&
             rep.tail_gap <= tail_allowance;
  return rep;
}

}  // namespace horn
