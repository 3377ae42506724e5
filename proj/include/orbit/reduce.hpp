#pragma once

// Dimension reduction by projecting away a subspace that meets the
// rank <= r matrices only at zero.
//
// Identify C^{l x l} with polynomials of degree < l in x and in y, entry
// (a, b) being the coefficient of x^a y^b. W_r is the part of the ideal
// generated by (x - y)^r; it has dimension (l - r)^2 and contains no nonzero
// matrix of rank <= r (a Wronskian argument). The difference of two
// feature matrices of rank <= n has rank <= 2n, so projecting onto the
// orthogonal complement of W_{2n} keeps the feature map bi-Lipschitz while
// shrinking it to n(2l - 2n + 1) real coordinates (symmetric case) or
// 4n(l - n) (Hermitian case).

#include <cstddef>
#include <memory>
#include <vector>

#include "orbit/embed.hpp"
#include "orbit/matcore.hpp"
#include "orbit/metrics.hpp"

namespace orbit {

enum class Ambient { Symmetric, Hermitian };

std::string_view to_string(Ambient a);

/// Orthonormal basis, in the isometric flattening coordinates of the ambient
/// space (see flatten_symmetric / flatten_hermitian), of the complement of
/// W_rank inside that ambient space.
struct ReducerBasis {
  int rank = 0;
  int size = 0;
  Ambient ambient = Ambient::Symmetric;
  RealMatrix basis;  // ambient coordinates x dim, orthonormal columns

  std::size_t dim() const { return static_cast<std::size_t>(basis.cols()); }
};

using ReducedFeature = FeatureVector;

/// Coefficient matrices of (x - y)^rank x^i y^j for 0 <= i, j < size - rank.
std::vector<RealMatrix> build_w_basis(int size, int rank);

/// Requires size >= 2n > 0; rank is 2n.
ReducerBasis build_reducer(int n, int size, Ambient ambient);

/// Orthonormal basis (ambient coordinates) of W_rank intersected with the
/// ambient space; exposed for the dimension checks.
RealMatrix intersection_basis(int size, int rank, Ambient ambient);

ReducedFeature project(const ReducerBasis& basis, const RealMatrix& m);
ReducedFeature project(const ReducerBasis& basis, const ComplexMatrix& m);

/// n(2l-2n+1), n(2l-2n-1), 4n(l-n), 4n(l-n-1) for O, E, U, F.
std::size_t reduced_feature_dim(Group group, int n, int l);

/// Reduced feature map for one (group, n, l); the reducer basis is built
/// once and the object is immutable afterwards.
class ReducedEmbedding {
 public:
  ReducedEmbedding(GroupAction group, int l);

  ReducedFeature operator()(const AnyMatrix& a) const;

  const ReducerBasis& basis() const { return *basis_; }
  GroupAction group() const { return group_; }
  int points() const { return l_; }
  std::size_t dim() const { return basis_->dim(); }

 private:
  GroupAction group_;
  int l_;
  std::shared_ptr<const ReducerBasis> basis_;
};

/// Convenience wrapper using a process-wide cache of reducers.
ReducedFeature reduced_embed(GroupAction group, const AnyMatrix& a);

}  // namespace orbit
