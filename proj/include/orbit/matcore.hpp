#pragma once

// Dense linear-algebra kernel shared by the metric and embedding code.
//
// Matrices are Eigen dynamic matrices. A configuration of l points in n
// dimensions is an n x l matrix whose columns are the points.

#include <complex>
#include <optional>
#include <string_view>
#include <variant>

#include <Eigen/Dense>

#include "orbit/errors.hpp"

namespace orbit {

using Complex = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// A configuration that is either real or complex. Real inputs are promoted
/// when a complex group acts on them.
using AnyMatrix = std::variant<RealMatrix, ComplexMatrix>;

namespace tol {
inline constexpr double orth = 1e-8;   // U*U = I on unit-scale factors
inline constexpr double herm = 1e-8;   // relative asymmetry admitted by psd_sqrt
inline constexpr double recon = 1e-10; // relative reconstruction error
inline constexpr double neg_eig = 1e-9;  // default clamp for psd_sqrt, relative to |B|
}  // namespace tol

/// Thin SVD, M = U diag(s) V*, r = min(rows, cols) triplets, s nonincreasing.
template <typename Scalar>
struct SvdFactors {
  Matrix<Scalar> u;
  RealVector singular_values;
  Matrix<Scalar> v;
};

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
template <typename Scalar>
struct EigenFactors {
  Matrix<Scalar> q;
  RealVector eigenvalues;
};

template <typename Scalar>
void require_finite(const Matrix<Scalar>& m, std::string_view what);

template <typename Scalar>
SvdFactors<Scalar> svd(const Matrix<Scalar>& m);

template <typename Scalar>
EigenFactors<Scalar> hermitian_eig(const Matrix<Scalar>& m);

template <typename Scalar>
double nuclear_norm(const Matrix<Scalar>& m);

/// Unique PSD square root of a Hermitian PSD matrix. Eigenvalues in
/// [-tol_neg, 0) are clamped to zero; tol_neg defaults to 1e-9 * |B|.
template <typename Scalar>
Matrix<Scalar> psd_sqrt(const Matrix<Scalar>& b, std::optional<double> tol_neg = std::nullopt);

template <typename Scalar>
double frobenius_dist(const Matrix<Scalar>& a, const Matrix<Scalar>& b);

/// Frobenius norm of the Hermitian part defect, |M - M*|.
template <typename Scalar>
double hermitian_defect(const Matrix<Scalar>& m);

inline ComplexMatrix to_complex(const RealMatrix& m) { return m.cast<Complex>(); }

/// Nuclear norm of a real 2x2 matrix: (s1 + s2)^2 = |M|^2 + 2|det M|.
inline double nuclear_norm_2x2(double m00, double m01, double m10, double m11) {
  const double fro2 = m00 * m00 + m01 * m01 + m10 * m10 + m11 * m11;
  const double det = m00 * m11 - m01 * m10;
  return std::sqrt(fro2 + 2.0 * std::abs(det));
}

}  // namespace orbit
