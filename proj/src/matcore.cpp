#include "orbit/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace orbit {

template <typename Scalar>
void require_finite(const Matrix<Scalar>& m, std::string_view what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite, std::string(what) + " contains NaN or Inf");
  }
}

template <typename Scalar>
SvdFactors<Scalar> svd(const Matrix<Scalar>& m) {
  require_finite(m, "svd input");
  if (m.size() == 0) {
    const Eigen::Index r = std::min(m.rows(), m.cols());
    return {Matrix<Scalar>::Zero(m.rows(), r), RealVector::Zero(r), Matrix<Scalar>::Zero(m.cols(), r)};
  }
  // One-sided Jacobi is slow for large inputs but every matrix here is at
  // most a few dozen rows, and it gives the best relative accuracy.
  Eigen::JacobiSVD<Matrix<Scalar>> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdFactors<Scalar> out{solver.matrixU(), solver.singularValues(), solver.matrixV()};
  if (!out.u.allFinite() || !out.v.allFinite() || !out.singular_values.allFinite()) {
    throw Error(ErrorCode::ConvergenceFailure, "SVD produced non-finite factors");
  }
  return out;
}

template <typename Scalar>
EigenFactors<Scalar> hermitian_eig(const Matrix<Scalar>& m) {
  require_finite(m, "eigensolver input");
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "eigendecomposition needs a square matrix");
  }
  if (m.size() == 0) return {Matrix<Scalar>(0, 0), RealVector(0)};
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
  }
  return {solver.eigenvectors(), solver.eigenvalues()};
}

template <typename Scalar>
double nuclear_norm(const Matrix<Scalar>& m) {
  return svd(m).singular_values.sum();
}

template <typename Scalar>
double hermitian_defect(const Matrix<Scalar>& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "Hermitian check needs a square matrix");
  }
  return (m - m.adjoint()).norm();
}

template <typename Scalar>
Matrix<Scalar> psd_sqrt(const Matrix<Scalar>& b, std::optional<double> tol_neg) {
  require_finite(b, "psd_sqrt input");
  if (b.rows() != b.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "psd_sqrt needs a square matrix");
  }
  const double scale = b.norm();
  if (hermitian_defect(b) > tol::herm * std::max(1.0, scale)) {
    throw Error(ErrorCode::NotHermitian, "psd_sqrt input is not Hermitian");
  }
  const double neg = tol_neg.value_or(tol::neg_eig * scale);

  const Matrix<Scalar> sym = (b + b.adjoint()) / 2.0;
  auto eig = hermitian_eig(sym);
  RealVector roots(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    const double lambda = eig.eigenvalues(i);
    if (lambda < -neg) {
      throw Error(ErrorCode::NotPSD, "eigenvalue " + std::to_string(lambda) + " below -tol_neg");
    }
    roots(i) = std::sqrt(std::max(lambda, 0.0));
  }
  Matrix<Scalar> root = eig.q * roots.asDiagonal() * eig.q.adjoint();
  return (root + root.adjoint()) / 2.0;
}

template <typename Scalar>
double frobenius_dist(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "frobenius_dist operands differ in shape");
  }
  return (a - b).norm();
}

#define ORBIT_INSTANTIATE(S)                                                        \
  template void require_finite<S>(const Matrix<S>&, std::string_view);              \
  template SvdFactors<S> svd<S>(const Matrix<S>&);                                  \
  template EigenFactors<S> hermitian_eig<S>(const Matrix<S>&);                      \
  template double nuclear_norm<S>(const Matrix<S>&);                                \
  template double hermitian_defect<S>(const Matrix<S>&);                            \
  template Matrix<S> psd_sqrt<S>(const Matrix<S>&, std::optional<double>);          \
  template double frobenius_dist<S>(const Matrix<S>&, const Matrix<S>&);

ORBIT_INSTANTIATE(double)
ORBIT_INSTANTIATE(Complex)

#undef ORBIT_INSTANTIATE

}  // namespace orbit
