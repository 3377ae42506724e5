#pragma once

// Planar triangles under E(2): the side-length map, which is orbit
// separating and Lipschitz (constant sqrt(3)) but has no lower Lipschitz
// bound, and the three-coordinate map Psi, which is isometric to psi on
// R^{2x3} and therefore bi-Lipschitz with distortion sqrt(2).

#include <array>

#include <Eigen/Dense>

#include "orbit/matcore.hpp"

namespace orbit {

/// Columns are the vertices a1, a2, a3. Degenerate triangles are allowed.
using Triangle = Eigen::Matrix<double, 2, 3>;

struct SideLengths {
  double x1 = 0.0;  // |a2 - a3|
  double x2 = 0.0;  // |a3 - a1|
  double x3 = 0.0;  // |a1 - a2|

  Eigen::Vector3d vec() const { return {x1, x2, x3}; }
};

/// Point of the cone z >= 0, p^2 + q^2 <= z^2.
struct PsiCoords {
  double p = 0.0;
  double q = 0.0;
  double z = 0.0;

  Eigen::Vector3d vec() const { return {p, q, z}; }
};

SideLengths gamma(const Triangle& t);

/// Psi(T) = ((s11 - s22)/sqrt2, sqrt2 s12, (s11 + s22)/sqrt2) where
/// [[s11, s12], [s12, s22]] is the PSD square root of the Gram matrix of
/// [(a2 - a1)/sqrt2, (2a3 - a1 - a2)/sqrt6].
PsiCoords psi_triangle(const Triangle& t);

/// Inverse of Psi up to E(2): a centered triangle whose Psi is the given
/// cone point. Throws OutOfRange for points outside the cone.
Triangle triangle_from_psi(const PsiCoords& c);

/// d_E(2) via the closed-form 2x2 nuclear norm; no allocation.
double triangle_orbit_distance(const Triangle& a, const Triangle& b);

struct Counterexample {
  Triangle a;
  Triangle b;
  double orbit_distance = 0.0;  // d_E(2)(A, B) = sqrt(6) eps
  double side_distance = 0.0;   // |gamma(A) - gamma(B)|
  double ratio = 0.0;           // side_distance / orbit_distance
};

/// A = [[1,0,-1],[0,0,0]], B = [[1,0,-1],[-eps,2eps,-eps]] for 0 < eps < 0.1.
Counterexample gamma_counterexample(double eps);

}  // namespace orbit
