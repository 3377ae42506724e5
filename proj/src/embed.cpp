#include "orbit/embed.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace orbit {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

// sqrt(A* A) = V diag(s) V* from the thin SVD of A. Going through the SVD
// keeps the null space exactly zero instead of taking square roots of
// round-off sized eigenvalues of the Gram matrix.
template <typename Scalar>
Matrix<Scalar> gram_root(const Matrix<Scalar>& a) {
  const auto f = svd(a);
  Matrix<Scalar> root = f.v * f.singular_values.asDiagonal() * f.v.adjoint();
  return (root + root.adjoint()) / 2.0;
}

}  // namespace

double FeatureVector::distance_to(const FeatureVector& other) const {
  if (coords.size() != other.coords.size()) {
    throw Error(ErrorCode::ShapeMismatch, "feature vectors differ in length");
  }
  return (coords - other.coords).norm();
}

RealVector flatten_symmetric(const RealMatrix& m) {
  const Eigen::Index l = m.rows();
  RealVector out(l * (l + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < l; ++i) {
    out(k++) = m(i, i);
    for (Eigen::Index j = i + 1; j < l; ++j) out(k++) = kSqrt2 * m(i, j);
  }
  return out;
}

RealMatrix unflatten_symmetric(const RealVector& coords, int l) {
  if (coords.size() != l * (l + 1) / 2) {
    throw Error(ErrorCode::ShapeMismatch, "symmetric flattening has the wrong length");
  }
  RealMatrix m(l, l);
  Eigen::Index k = 0;
  for (int i = 0; i < l; ++i) {
    m(i, i) = coords(k++);
    for (int j = i + 1; j < l; ++j) m(i, j) = m(j, i) = coords(k++) / kSqrt2;
  }
  return m;
}

RealVector flatten_hermitian(const ComplexMatrix& m) {
  const Eigen::Index l = m.rows();
  RealVector out(l * l);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < l; ++i) {
    out(k++) = m(i, i).real();
    for (Eigen::Index j = i + 1; j < l; ++j) {
      out(k++) = kSqrt2 * m(i, j).real();
      out(k++) = kSqrt2 * m(i, j).imag();
    }
  }
  return out;
}

ComplexMatrix unflatten_hermitian(const RealVector& coords, int l) {
  if (coords.size() != l * l) {
    throw Error(ErrorCode::ShapeMismatch, "Hermitian flattening has the wrong length");
  }
  ComplexMatrix m(l, l);
  Eigen::Index k = 0;
  for (int i = 0; i < l; ++i) {
    m(i, i) = coords(k++);
    for (int j = i + 1; j < l; ++j) {
      const Complex z(coords(k) / kSqrt2, coords(k + 1) / kSqrt2);
      k += 2;
      m(i, j) = z;
      m(j, i) = std::conj(z);
    }
  }
  return m;
}

RealMatrix centering_basis(int l) {
  if (l <= 0) throw Error(ErrorCode::ShapeMismatch, "centering basis needs l >= 1");
  static std::mutex guard;
  static std::map<int, RealMatrix> cache;
  {
    std::lock_guard lock(guard);
    if (auto it = cache.find(l); it != cache.end()) return it->second;
  }

  RealMatrix q(l, l);
  const RealVector ones = RealVector::Constant(l, 1.0 / std::sqrt(static_cast<double>(l)));
  q.col(l - 1) = ones;
  for (int c = 0; c + 1 < l; ++c) {
    RealVector v = RealVector::Unit(l, c);
    // two passes of modified Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass) {
      v -= q.col(l - 1).dot(v) * q.col(l - 1);
      for (int p = 0; p < c; ++p) v -= q.col(p).dot(v) * q.col(p);
    }
    q.col(c) = v.normalized();
  }

  std::lock_guard lock(guard);
  cache.emplace(l, q);
  return q;
}

template <typename Scalar>
Matrix<Scalar> centered_block(const Matrix<Scalar>& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::ShapeMismatch, "centered_block needs a nonempty square matrix");
  }
  const int l = static_cast<int>(m.rows());
  const Matrix<Scalar> q = centering_basis(l).template cast<Scalar>();
  const Matrix<Scalar> full = q.adjoint() * m * q;
  return full.topLeftCorner(l - 1, l - 1);
}

template Matrix<double> centered_block<double>(const Matrix<double>&);
template Matrix<Complex> centered_block<Complex>(const Matrix<Complex>&);

Embedding<RealMatrix> phi(const RealMatrix& a) {
  Embedding<RealMatrix> out;
  out.matrix = gram_root<double>(a);
  out.feature.coords = flatten_symmetric(out.matrix);
  return out;
}

Embedding<RealMatrix> psi(const RealMatrix& a) {
  Embedding<RealMatrix> out;
  out.matrix = gram_root<double>(center(a));
  RealMatrix block = centered_block<double>(out.matrix);
  block = (block + block.transpose()) / 2.0;
  out.feature.coords = flatten_symmetric(block);
  return out;
}

Embedding<ComplexMatrix> phi_c(const ComplexMatrix& a) {
  Embedding<ComplexMatrix> out;
  out.matrix = gram_root<Complex>(a);
  out.feature.coords = flatten_hermitian(out.matrix);
  return out;
}

Embedding<ComplexMatrix> psi_c(const ComplexMatrix& a) {
  Embedding<ComplexMatrix> out;
  out.matrix = gram_root<Complex>(center(a));
  ComplexMatrix block = centered_block<Complex>(out.matrix);
  block = (block + block.adjoint()) / 2.0;
  out.feature.coords = flatten_hermitian(block);
  return out;
}

FeatureVector full_feature(Group group, const AnyMatrix& a) {
  const auto promoted = [&]() -> ComplexMatrix {
    if (const auto* r = std::get_if<RealMatrix>(&a)) return to_complex(*r);
    return std::get<ComplexMatrix>(a);
  };
  const auto real = [&]() -> const RealMatrix& {
    if (const auto* r = std::get_if<RealMatrix>(&a)) return *r;
    throw Error(ErrorCode::FieldMismatch, "group " + std::string(to_string(group)) + " needs real input");
  };
  switch (group) {
    case Group::Orthogonal: return phi(real()).feature;
    case Group::Euclidean: return psi(real()).feature;
    case Group::Unitary: return phi_c(promoted()).feature;
    case Group::ComplexEuclidean: return psi_c(promoted()).feature;
  }
  return {};
}

std::size_t full_feature_dim(Group group, int l) {
  const auto ul = static_cast<std::size_t>(l);
  switch (group) {
    case Group::Orthogonal: return ul * (ul + 1) / 2;
    case Group::Euclidean: return ul * (ul - 1) / 2;
    case Group::Unitary: return ul * ul;
    case Group::ComplexEuclidean: return (ul - 1) * (ul - 1);
  }
  return 0;
}

}  // namespace orbit
