#include "orbit/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

namespace orbit {

std::string_view to_string(Group g) {
  switch (g) {
    case Group::Orthogonal: return "O";
    case Group::Euclidean: return "E";
    case Group::Unitary: return "U";
    case Group::ComplexEuclidean: return "F";
  }
  return "?";
}

GroupAction parse_group(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::ConfigInvalid, "empty group name");
  GroupAction out;
  switch (std::toupper(static_cast<unsigned char>(text.front()))) {
    case 'O': out.kind = Group::Orthogonal; break;
    case 'E': out.kind = Group::Euclidean; break;
    case 'U': out.kind = Group::Unitary; break;
    case 'F': out.kind = Group::ComplexEuclidean; break;
    default: throw Error(ErrorCode::ConfigInvalid, "unknown group '" + std::string(text) + "'");
  }
  const auto digits = text.substr(1);
  if (!digits.empty()) {
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out.n);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || out.n <= 0) {
      throw Error(ErrorCode::ConfigInvalid, "bad group dimension in '" + std::string(text) + "'");
    }
  }
  return out;
}

template <typename Scalar>
Matrix<Scalar> Alignment<Scalar>::apply(const Matrix<Scalar>& a) const {
  Matrix<Scalar> out = rotation * a;
  if (translation.size() > 0) out.colwise() += translation;
  return out;
}

template struct Alignment<double>;
template struct Alignment<Complex>;

template <typename Scalar>
Vector<Scalar> column_mean(const Matrix<Scalar>& a) {
  if (a.cols() == 0) throw Error(ErrorCode::ShapeMismatch, "cannot center an empty configuration");
  return a.rowwise().mean();
}

template <typename Scalar>
Matrix<Scalar> center(const Matrix<Scalar>& a) {
  require_finite(a, "center input");
  return a.colwise() - column_mean(a);
}

template Vector<double> column_mean<double>(const Matrix<double>&);
template Vector<Complex> column_mean<Complex>(const Matrix<Complex>&);
template Matrix<double> center<double>(const Matrix<double>&);
template Matrix<Complex> center<Complex>(const Matrix<Complex>&);

namespace {

template <typename Scalar>
void check_pair(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::ShapeMismatch, "configurations differ in shape (" + std::to_string(a.rows()) +
                                              "x" + std::to_string(a.cols()) + " vs " +
                                              std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + ")");
  }
  require_finite(a, "first configuration");
  require_finite(b, "second configuration");
}

template <typename Scalar>
OrbitDistance<Scalar> procrustes(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  check_pair(a, b);
  const Matrix<Scalar> cross = a * b.adjoint();
  const auto f = svd(cross);
  OrbitDistance<Scalar> out;
  out.alignment.rotation = f.v * f.u.adjoint();
  out.alignment.translation = Vector<Scalar>::Zero(a.rows());
  out.distance = (out.alignment.rotation * a - b).norm();
  out.alignment.achieved_distance = out.distance;
  return out;
}

template <typename Scalar>
OrbitDistance<Scalar> procrustes_with_translation(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  check_pair(a, b);
  auto out = procrustes<Scalar>(center(a), center(b));
  out.alignment.translation = column_mean(b) - out.alignment.rotation * column_mean(a);
  out.alignment.achieved_distance = (out.alignment.apply(a) - b).norm();
  return out;
}

}  // namespace

OrbitDistance<Complex> dist_unitary(const ComplexMatrix& a, const ComplexMatrix& b) {
  return procrustes<Complex>(a, b);
}

OrbitDistance<double> dist_orthogonal(const RealMatrix& a, const RealMatrix& b) {
  return procrustes<double>(a, b);
}

OrbitDistance<double> dist_euclidean(const RealMatrix& a, const RealMatrix& b) {
  return procrustes_with_translation<double>(a, b);
}

OrbitDistance<Complex> dist_complex_euclidean(const ComplexMatrix& a, const ComplexMatrix& b) {
  return procrustes_with_translation<Complex>(a, b);
}

template <typename Scalar>
double procrustes_closed_form(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  check_pair(a, b);
  const Matrix<Scalar> cross = a * b.adjoint();
  const double sq = a.squaredNorm() + b.squaredNorm() - 2.0 * nuclear_norm(cross);
  return std::sqrt(std::max(sq, 0.0));
}

template double procrustes_closed_form<double>(const Matrix<double>&, const Matrix<double>&);
template double procrustes_closed_form<Complex>(const Matrix<Complex>&, const Matrix<Complex>&);

namespace {

ComplexMatrix as_complex(const AnyMatrix& m) {
  if (const auto* r = std::get_if<RealMatrix>(&m)) return to_complex(*r);
  return std::get<ComplexMatrix>(m);
}

const RealMatrix& as_real(const AnyMatrix& m, Group g) {
  if (const auto* r = std::get_if<RealMatrix>(&m)) return *r;
  throw Error(ErrorCode::FieldMismatch,
              "group " + std::string(to_string(g)) + " acts on real configurations only");
}

}  // namespace

double orbit_distance(Group group, const AnyMatrix& a, const AnyMatrix& b) {
  switch (group) {
    case Group::Orthogonal: return dist_orthogonal(as_real(a, group), as_real(b, group)).distance;
    case Group::Euclidean: return dist_euclidean(as_real(a, group), as_real(b, group)).distance;
    case Group::Unitary: return dist_unitary(as_complex(a), as_complex(b)).distance;
    case Group::ComplexEuclidean: return dist_complex_euclidean(as_complex(a), as_complex(b)).distance;
  }
  return 0.0;
}

}  // namespace orbit
