#pragma once

// Test-only generators and brute-force oracles. Nothing here calls the
// library's SVD-based distance code, so the oracles stay independent of the
// implementation they check.

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "orbit/matcore.hpp"

namespace orbit::testing {

inline RealMatrix random_real(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  RealMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = g(rng);
  return m;
}

inline ComplexMatrix random_complex(std::mt19937_64& rng, int rows, int cols, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  ComplexMatrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) {
      const double re = g(rng);
      m(r, c) = Complex(re, g(rng));
    }
  return m;
}

// Haar-ish orthogonal / unitary matrices from QR with the R-diagonal phase fixed.
inline RealMatrix random_orthogonal(std::mt19937_64& rng, int n) {
  Eigen::HouseholderQR<RealMatrix> qr(random_real(rng, n, n));
  RealMatrix q = qr.householderQ();
  const RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) *= -1.0;
  return q;
}

inline ComplexMatrix random_unitary(std::mt19937_64& rng, int n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(random_complex(rng, n, n));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

inline RealMatrix rotation2(double theta) {
  RealMatrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

/// min over W in O(2) of |W A - B|, W = rotation(theta) or
/// diag(1, -1) rotation(theta), theta on a uniform grid with `points` total
/// grid points split between the two components.
inline double o2_grid_min(const RealMatrix& a, const RealMatrix& b, long points) {
  // |WA - B|^2 = |A|^2 + |B|^2 - 2 tr(W A B^T)
  const RealMatrix m = a * b.transpose();
  const double base = a.squaredNorm() + b.squaredNorm();
  const long per = points / 2;
  double best = std::numeric_limits<double>::infinity();
  for (long k = 0; k < per; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(per);
    const double c = std::cos(t);
    const double s = std::sin(t);
    // rotation [[c, -s], [s, c]]: tr(W M) = c(m00 + m11) + s(m01 - m10)
    const double tr_rot = c * (m(0, 0) + m(1, 1)) - s * m(1, 0) + s * m(0, 1);
    // reflection diag(1,-1) R: [[c, -s], [-s, -c]]
    const double tr_ref = c * (m(0, 0) - m(1, 1)) - s * m(1, 0) - s * m(0, 1);
    best = std::min(best, base - 2.0 * std::max(tr_rot, tr_ref));
  }
  return std::sqrt(std::max(best, 0.0));
}

/// min over W in U(2) of |W A - B|. W = e^{i a} [[e^{i b} cos t, e^{i c} sin t],
/// [-e^{-i c} sin t, e^{-i b} cos t]]; the global phase a is maximised in
/// closed form (max_a Re(e^{i a} z) = |z|), the rest is a dense grid.
inline double u2_grid_min(const ComplexMatrix& a, const ComplexMatrix& b, int steps) {
  const ComplexMatrix m = a * b.adjoint();
  const double base = a.squaredNorm() + b.squaredNorm();
  double best_trace = 0.0;
  const double pi = std::numbers::pi;
  for (int it = 0; it <= steps; ++it) {
    const double t = 0.5 * pi * it / steps;
    for (int ib = 0; ib < steps; ++ib) {
      const double phb = 2.0 * pi * ib / steps;
      for (int ic = 0; ic < steps; ++ic) {
        const double phc = 2.0 * pi * ic / steps;
        const Complex eb = std::polar(1.0, phb);
        const Complex ec = std::polar(1.0, phc);
        const Complex w00 = eb * std::cos(t), w01 = ec * std::sin(t);
        const Complex w10 = -std::conj(ec) * std::sin(t), w11 = std::conj(eb) * std::cos(t);
        const Complex tr = w00 * m(0, 0) + w01 * m(1, 0) + w10 * m(0, 1) + w11 * m(1, 1);
        best_trace = std::max(best_trace, std::abs(tr));
      }
    }
  }
  return std::sqrt(std::max(base - 2.0 * best_trace, 0.0));
}

/// Translation-only distance min_z sum_i |z + a_i - b_i|^2 by a dense grid
/// followed by golden-section refinement along each coordinate direction.
inline double translation_line_search(const RealMatrix& a, const RealMatrix& b) {
  const RealMatrix diff = a - b;
  double total = 0.0;
  for (Eigen::Index r = 0; r < diff.rows(); ++r) {
    const auto f = [&](double z) { return (diff.row(r).array() + z).square().sum(); };
    const double span = diff.row(r).cwiseAbs().maxCoeff() + 1.0;
    double best_z = -span;
    double best_f = f(best_z);
    const int grid = 2001;
    for (int k = 1; k < grid; ++k) {
      const double z = -span + 2.0 * span * k / (grid - 1);
      if (const double v = f(z); v < best_f) {
        best_f = v;
        best_z = z;
      }
    }
    double lo = best_z - 2.0 * span / (grid - 1);
    double hi = best_z + 2.0 * span / (grid - 1);
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200; ++it) {
      const double x1 = hi - phi * (hi - lo);
      const double x2 = lo + phi * (hi - lo);
      if (f(x1) < f(x2)) hi = x2;
      else lo = x1;
    }
    total += f((lo + hi) / 2.0);
  }
  return std::sqrt(total);
}

/// Symmetric matrix of rank <= rank: sum of +-u u^T with Gaussian u.
inline RealMatrix random_low_rank_symmetric(std::mt19937_64& rng, int size, int rank) {
  RealMatrix m = RealMatrix::Zero(size, size);
  std::bernoulli_distribution coin;
  for (int i = 0; i < rank; ++i) {
    const RealMatrix u = random_real(rng, size, 1);
    m += (coin(rng) ? 1.0 : -1.0) * u * u.transpose();
  }
  return m;
}

}  // namespace orbit::testing
