#include "orbit/reduce.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

namespace orbit {

namespace {

// Columns with a residual below this fraction of their original norm are
// treated as linearly dependent.
constexpr double kDependence = 1e-8;

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

// Modified Gram-Schmidt with one reorthogonalization pass. Appends the
// accepted directions of `candidates` to `basis` and returns how many were
// accepted.
int orthonormalize_into(std::vector<RealVector>& basis, const std::vector<RealVector>& candidates) {
  int accepted = 0;
  for (const auto& c : candidates) {
    const double original = c.norm();
    if (original == 0.0) continue;
    RealVector v = c;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) v -= q.dot(v) * q;
    }
    const double residual = v.norm();
    if (residual <= kDependence * original) continue;
    basis.push_back(v / residual);
    ++accepted;
  }
  return accepted;
}

RealMatrix to_columns(const std::vector<RealVector>& vectors, Eigen::Index rows) {
  RealMatrix out(rows, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) out.col(static_cast<Eigen::Index>(i)) = vectors[i];
  return out;
}

Eigen::Index ambient_coords(int size, Ambient ambient) {
  return ambient == Ambient::Symmetric ? size * (size + 1) / 2 : size * size;
}

std::vector<RealVector> intersection_spanning_set(int size, int rank, Ambient ambient) {
  std::vector<RealVector> span;
  for (const auto& w : build_w_basis(size, rank)) {
    const RealMatrix sym = (w + w.transpose()) / 2.0;
    if (ambient == Ambient::Symmetric) {
      span.push_back(flatten_symmetric(sym));
    } else {
      // W is closed under transposition and has a real basis, so its
      // Hermitian part is spanned by sym(w) and i * skew(w).
      const RealMatrix skew = (w - w.transpose()) / 2.0;
      span.push_back(flatten_hermitian(sym.cast<Complex>()));
      span.push_back(flatten_hermitian(Complex(0.0, 1.0) * skew.cast<Complex>()));
    }
  }
  return span;
}

}  // namespace

std::string_view to_string(Ambient a) {
  return a == Ambient::Symmetric ? "symmetric" : "hermitian";
}

std::vector<RealMatrix> build_w_basis(int size, int rank) {
  if (rank <= 0 || rank > size) {
    throw Error(ErrorCode::InvalidRank,
                "rank " + std::to_string(rank) + " outside (0, " + std::to_string(size) + "]");
  }
  const int free = size - rank;
  std::vector<RealMatrix> out;
  out.reserve(static_cast<std::size_t>(free * free));
  for (int i = 0; i < free; ++i) {
    for (int j = 0; j < free; ++j) {
      RealMatrix m = RealMatrix::Zero(size, size);
      // (x - y)^r = sum_k C(r, k) x^{r-k} (-y)^k
      for (int k = 0; k <= rank; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        m(rank - k + i, k + j) = sign * binomial(rank, k);
      }
      out.push_back(std::move(m));
    }
  }
  return out;
}

RealMatrix intersection_basis(int size, int rank, Ambient ambient) {
  std::vector<RealVector> basis;
  orthonormalize_into(basis, intersection_spanning_set(size, rank, ambient));
  return to_columns(basis, ambient_coords(size, ambient));
}

ReducerBasis build_reducer(int n, int size, Ambient ambient) {
  if (n <= 0 || size < 2 * n) {
    throw Error(ErrorCode::DimensionHypothesis,
                "reduction needs l >= 2n > 0 (n=" + std::to_string(n) + ", l=" + std::to_string(size) + ")");
  }
  const int rank = 2 * n;
  const Eigen::Index m = ambient_coords(size, ambient);

  std::vector<RealVector> basis;
  const int inside = orthonormalize_into(basis, intersection_spanning_set(size, rank, ambient));

  std::vector<RealVector> unit;
  unit.reserve(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k) unit.push_back(RealVector::Unit(m, k));
  orthonormalize_into(basis, unit);

  ReducerBasis out;
  out.rank = rank;
  out.size = size;
  out.ambient = ambient;
  out.basis = RealMatrix(m, static_cast<Eigen::Index>(basis.size()) - inside);
  for (std::size_t i = static_cast<std::size_t>(inside); i < basis.size(); ++i) {
    out.basis.col(static_cast<Eigen::Index>(i) - inside) = basis[i];
  }
  return out;
}

ReducedFeature project(const ReducerBasis& basis, const RealMatrix& m) {
  if (m.rows() != basis.size || m.cols() != basis.size) {
    throw Error(ErrorCode::ShapeMismatch, "matrix size does not match the reducer");
  }
  require_finite<double>(m, "projection input");
  if (basis.ambient == Ambient::Hermitian) return project(basis, to_complex(m));
  if (hermitian_defect<double>(m) > tol::herm * std::max(1.0, m.norm())) {
    throw Error(ErrorCode::AmbientMismatch, "matrix is not symmetric");
  }
  const RealMatrix sym = (m + m.transpose()) / 2.0;
  return {basis.basis.transpose() * flatten_symmetric(sym)};
}

ReducedFeature project(const ReducerBasis& basis, const ComplexMatrix& m) {
  if (m.rows() != basis.size || m.cols() != basis.size) {
    throw Error(ErrorCode::ShapeMismatch, "matrix size does not match the reducer");
  }
  require_finite<Complex>(m, "projection input");
  if (hermitian_defect<Complex>(m) > tol::herm * std::max(1.0, m.norm())) {
    throw Error(ErrorCode::AmbientMismatch, "matrix is not Hermitian");
  }
  if (basis.ambient == Ambient::Symmetric) {
    if (m.imag().norm() > tol::herm * std::max(1.0, m.norm())) {
      throw Error(ErrorCode::AmbientMismatch, "complex matrix given to a symmetric reducer");
    }
    return project(basis, RealMatrix(m.real()));
  }
  const ComplexMatrix herm = (m + m.adjoint()) / 2.0;
  return {basis.basis.transpose() * flatten_hermitian(herm)};
}

std::size_t reduced_feature_dim(Group group, int n, int l) {
  const long nn = n;
  const long ll = l;
  switch (group) {
    case Group::Orthogonal: return static_cast<std::size_t>(nn * (2 * ll - 2 * nn + 1));
    case Group::Euclidean: return static_cast<std::size_t>(nn * (2 * ll - 2 * nn - 1));
    case Group::Unitary: return static_cast<std::size_t>(4 * nn * (ll - nn));
    case Group::ComplexEuclidean: return static_cast<std::size_t>(4 * nn * (ll - nn - 1));
  }
  return 0;
}

namespace {

std::shared_ptr<const ReducerBasis> cached_reducer(int n, int size, Ambient ambient) {
  static std::mutex guard;
  static std::map<std::tuple<int, int, Ambient>, std::shared_ptr<const ReducerBasis>> cache;
  const auto key = std::make_tuple(n, size, ambient);
  {
    std::lock_guard lock(guard);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const ReducerBasis>(build_reducer(n, size, ambient));
  std::lock_guard lock(guard);
  return cache.emplace(key, std::move(built)).first->second;
}

}  // namespace

ReducedEmbedding::ReducedEmbedding(GroupAction group, int l) : group_(group), l_(l) {
  const int size = has_translation(group.kind) ? l - 1 : l;
  if (group.n <= 0 || size < 2 * group.n) {
    throw Error(ErrorCode::DimensionHypothesis,
                "reduced " + std::string(to_string(group.kind)) + " map needs " +
                    (has_translation(group.kind) ? "l - 1" : "l") + " >= 2n (n=" + std::to_string(group.n) +
                    ", l=" + std::to_string(l) + ")");
  }
  const Ambient ambient = is_complex_group(group.kind) ? Ambient::Hermitian : Ambient::Symmetric;
  basis_ = cached_reducer(group.n, size, ambient);
}

ReducedFeature ReducedEmbedding::operator()(const AnyMatrix& a) const {
  const auto [rows, cols] = std::visit([](const auto& m) { return std::pair{m.rows(), m.cols()}; }, a);
  if (rows != group_.n || cols != l_) {
    throw Error(ErrorCode::ShapeMismatch, "configuration is " + std::to_string(rows) + "x" + std::to_string(cols) +
                                              ", reducer expects " + std::to_string(group_.n) + "x" +
                                              std::to_string(l_));
  }
  switch (group_.kind) {
    case Group::Orthogonal: {
      const auto* real = std::get_if<RealMatrix>(&a);
      if (!real) throw Error(ErrorCode::FieldMismatch, "O(n) acts on real configurations only");
      return project(*basis_, phi(*real).matrix);
    }
    case Group::Euclidean: {
      const auto* real = std::get_if<RealMatrix>(&a);
      if (!real) throw Error(ErrorCode::FieldMismatch, "E(n) acts on real configurations only");
      return project(*basis_, centered_block<double>(psi(*real).matrix));
    }
    case Group::Unitary:
    case Group::ComplexEuclidean: {
      const ComplexMatrix c = std::holds_alternative<RealMatrix>(a) ? to_complex(std::get<RealMatrix>(a))
                                                                    : std::get<ComplexMatrix>(a);
      if (group_.kind == Group::Unitary) return project(*basis_, phi_c(c).matrix);
      return project(*basis_, centered_block<Complex>(psi_c(c).matrix));
    }
  }
  return {};
}

ReducedFeature reduced_embed(GroupAction group, const AnyMatrix& a) {
  const int l = static_cast<int>(std::visit([](const auto& m) { return m.cols(); }, a));
  return ReducedEmbedding(group, l)(a);
}

}  // namespace orbit
