#pragma once

// Orbit distances for the orthogonal, unitary, euclidean and complex
// euclidean groups acting on n x l configurations by left multiplication
// (plus a common translation for the euclidean variants).

#include <string_view>

#include "orbit/matcore.hpp"

namespace orbit {

enum class Group { Orthogonal, Euclidean, Unitary, ComplexEuclidean };

struct GroupAction {
  Group kind = Group::Orthogonal;
  int n = 0;
  bool operator==(const GroupAction&) const = default;
};

std::string_view to_string(Group g);
/// Accepts "O", "E", "U", "F" (any case), optionally followed by the
/// dimension, e.g. "E2". Returns the group and the dimension (0 if absent).
GroupAction parse_group(std::string_view text);

constexpr bool is_complex_group(Group g) {
  return g == Group::Unitary || g == Group::ComplexEuclidean;
}
constexpr bool has_translation(Group g) {
  return g == Group::Euclidean || g == Group::ComplexEuclidean;
}

/// Group element g = (rotation, translation) acting by g.A = W A + t 1^T.
template <typename Scalar>
struct Alignment {
  Matrix<Scalar> rotation;
  Vector<Scalar> translation;
  double achieved_distance = 0.0;

  Matrix<Scalar> apply(const Matrix<Scalar>& a) const;
};

template <typename Scalar>
struct OrbitDistance {
  double distance = 0.0;
  Alignment<Scalar> alignment;
};

/// Subtracts the column mean from every column.
template <typename Scalar>
Matrix<Scalar> center(const Matrix<Scalar>& a);

template <typename Scalar>
Vector<Scalar> column_mean(const Matrix<Scalar>& a);

/// d_U via the SVD of A B*: W = V U* makes W A B* PSD and realises the
/// minimum. The returned distance is |W A - B| evaluated directly.
OrbitDistance<Complex> dist_unitary(const ComplexMatrix& a, const ComplexMatrix& b);

/// Real Procrustes problem; W is real orthogonal and the value equals
/// dist_unitary on the complexified inputs.
OrbitDistance<double> dist_orthogonal(const RealMatrix& a, const RealMatrix& b);

/// d_E(A, B) = d_O(center(A), center(B)); translation t = mean(B) - W mean(A).
OrbitDistance<double> dist_euclidean(const RealMatrix& a, const RealMatrix& b);

OrbitDistance<Complex> dist_complex_euclidean(const ComplexMatrix& a, const ComplexMatrix& b);

/// Closed form sqrt(max(0, |A|^2 + |B|^2 - 2 |A B*|_*)), no aligner. This is
/// the second route to d_U / d_O and is compared against the aligner route.
template <typename Scalar>
double procrustes_closed_form(const Matrix<Scalar>& a, const Matrix<Scalar>& b);

/// Dispatch on the group. Real inputs are promoted for U and F; complex
/// inputs to O or E raise FieldMismatch.
double orbit_distance(Group group, const AnyMatrix& a, const AnyMatrix& b);

}  // namespace orbit
