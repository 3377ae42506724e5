#include "orbit/triangle.hpp"

#include <cmath>
#include <string>

#include "orbit/metrics.hpp"

namespace orbit {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kSqrt6 = 2.44948974278317809820;

// [(a2 - a1)/sqrt2, (2a3 - a1 - a2)/sqrt6]: the centered triangle written in
// an orthonormal basis of the plane orthogonal to (1, 1, 1).
Eigen::Matrix2d reduced_frame(const Triangle& t) {
  Eigen::Matrix2d f;
  f.col(0) = (t.col(1) - t.col(0)) / kSqrt2;
  f.col(1) = (2.0 * t.col(2) - t.col(0) - t.col(1)) / kSqrt6;
  return f;
}

// Rows are the orthonormal vectors spanning the complement of (1, 1, 1);
// centered(T) = reduced_frame(T) * kFrame.
const Eigen::Matrix<double, 2, 3>& frame_rows() {
  static const Eigen::Matrix<double, 2, 3> rows = [] {
    Eigen::Matrix<double, 2, 3> r;
    r << -1.0 / kSqrt2, 1.0 / kSqrt2, 0.0,
         -1.0 / kSqrt6, -1.0 / kSqrt6, 2.0 / kSqrt6;
    return r;
  }();
  return rows;
}

}  // namespace

SideLengths gamma(const Triangle& t) {
  return {(t.col(1) - t.col(2)).norm(), (t.col(2) - t.col(0)).norm(), (t.col(0) - t.col(1)).norm()};
}

PsiCoords psi_triangle(const Triangle& t) {
  const Eigen::Matrix2d f = reduced_frame(t);
  const Eigen::Matrix2d gram = f.transpose() * f;
  // sqrt(G) = (G + sqrt(det G) I) / sqrt(tr G + 2 sqrt(det G)) for 2x2 PSD G,
  // and sqrt(det G) = |det F| avoids the cancellation in g11 g22 - g12^2.
  const double root_det = std::abs(f.determinant());
  const double denom_sq = gram.trace() + 2.0 * root_det;
  if (denom_sq <= 0.0) return {};
  const Eigen::Matrix2d s = (gram + root_det * Eigen::Matrix2d::Identity()) / std::sqrt(denom_sq);
  return {(s(0, 0) - s(1, 1)) / kSqrt2, kSqrt2 * s(0, 1), (s(0, 0) + s(1, 1)) / kSqrt2};
}

Triangle triangle_from_psi(const PsiCoords& c) {
  const double slack = 1e-10 * c.z * c.z + 1e-300;
  if (c.z < -1e-12 || c.p * c.p + c.q * c.q > c.z * c.z + slack) {
    throw Error(ErrorCode::OutOfRange, "point lies outside the cone z >= 0, p^2 + q^2 <= z^2");
  }
  Eigen::Matrix2d s;
  s << (c.z + c.p) / kSqrt2, c.q / kSqrt2,
       c.q / kSqrt2, (c.z - c.p) / kSqrt2;
  // s is symmetric PSD, so s^T s = s^2 and s itself is a valid frame.
  return s * frame_rows();
}

double triangle_orbit_distance(const Triangle& a, const Triangle& b) {
  const Triangle ac = a.colwise() - a.rowwise().mean();
  const Triangle bc = b.colwise() - b.rowwise().mean();
  const Eigen::Matrix2d cross = ac * bc.transpose();
  const double nuc = nuclear_norm_2x2(cross(0, 0), cross(0, 1), cross(1, 0), cross(1, 1));
  const double sq = ac.squaredNorm() + bc.squaredNorm() - 2.0 * nuc;
  return std::sqrt(std::max(sq, 0.0));
}

Counterexample gamma_counterexample(double eps) {
  if (!(eps > 0.0 && eps < 0.1)) {
    throw Error(ErrorCode::OutOfRange, "counterexample needs 0 < eps < 0.1, got " + std::to_string(eps));
  }
  Counterexample out;
  out.a << 1.0, 0.0, -1.0,
           0.0, 0.0, 0.0;
  out.b << 1.0, 0.0, -1.0,
           -eps, 2.0 * eps, -eps;
  out.orbit_distance = dist_euclidean(RealMatrix(out.a), RealMatrix(out.b)).distance;
  out.side_distance = (gamma(out.a).vec() - gamma(out.b).vec()).norm();
  out.ratio = out.side_distance / out.orbit_distance;
  return out;
}

}  // namespace orbit
