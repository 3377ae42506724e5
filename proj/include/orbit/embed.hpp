#pragma once

// Bi-Lipschitz invariant feature maps. For each group G the map F satisfies
//
//   d_G(A, B) <= |F(A) - F(B)| <= sqrt(2) d_G(A, B)
//
//   phi(A)   = sqrt(A^T A)              O(n),  image in S^2(R^l)
//   psi(A)   = phi(center(A))           E(n),  image in S^2(R^{l-1}) after a fixed base change
//   phi_c(A) = sqrt(A* A)               U(n),  image in H(C^l)
//   psi_c(A) = phi_c(center(A))         F(n),  image in H(C^{l-1})
//
// The matrix images are flattened isometrically (off-diagonal entries scaled
// by sqrt(2)) so Euclidean distance between feature vectors equals the
// Frobenius distance between the matrices.

#include <cstddef>

#include "orbit/matcore.hpp"
#include "orbit/metrics.hpp"

namespace orbit {

struct FeatureVector {
  RealVector coords;

  std::size_t ambient_dim() const { return static_cast<std::size_t>(coords.size()); }
  double distance_to(const FeatureVector& other) const;
};

template <typename MatrixType>
struct Embedding {
  MatrixType matrix;
  FeatureVector feature;
};

Embedding<RealMatrix> phi(const RealMatrix& a);
Embedding<RealMatrix> psi(const RealMatrix& a);
Embedding<ComplexMatrix> phi_c(const ComplexMatrix& a);
Embedding<ComplexMatrix> psi_c(const ComplexMatrix& a);

/// Feature for the group's full (unreduced) map; real inputs are promoted
/// for U and F.
FeatureVector full_feature(Group group, const AnyMatrix& a);

/// l(l+1)/2, l(l-1)/2, l^2, (l-1)^2 for O, E, U, F.
std::size_t full_feature_dim(Group group, int l);

/// Upper-triangle flattening of a symmetric matrix, length l(l+1)/2.
RealVector flatten_symmetric(const RealMatrix& m);
RealMatrix unflatten_symmetric(const RealVector& coords, int l);

/// Real flattening of a Hermitian matrix, length l^2: for each i <= j in
/// row-major order the diagonal value, or sqrt(2)Re and sqrt(2)Im.
RealVector flatten_hermitian(const ComplexMatrix& m);
ComplexMatrix unflatten_hermitian(const RealVector& coords, int l);

/// Orthogonal l x l matrix whose last column is 1/sqrt(l); the other columns
/// come from Gram-Schmidt on e_1, ..., e_{l-1} after 1/sqrt(l).
RealMatrix centering_basis(int l);

/// Leading (l-1) x (l-1) block of Q^T M Q with Q = centering_basis(l). For M
/// annihilating the all-ones vector nothing is lost.
template <typename Scalar>
Matrix<Scalar> centered_block(const Matrix<Scalar>& m);

}  // namespace orbit
