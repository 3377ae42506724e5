#pragma once

// Nearest-orbit search. With a feature map F satisfying
// d_G <= |F(a) - F(b)| <= C d_G, the exact Euclidean nearest neighbour of
// F(query) among the stored features is a C-approximate nearest orbit.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "orbit/embed.hpp"
#include "orbit/kdtree.hpp"
#include "orbit/metrics.hpp"
#include "orbit/reduce.hpp"

namespace orbit {

enum class FeatureMap { Full, Reduced };

std::string_view to_string(FeatureMap m);
FeatureMap parse_feature_map(std::string_view text);

struct DatabaseSchema {
  GroupAction group;  // group.n is the point dimension
  int l = 0;
  FeatureMap feature_map = FeatureMap::Full;

  bool operator==(const DatabaseSchema&) const = default;
};

struct ShapeRecord {
  std::string id;
  AnyMatrix matrix;
  FeatureVector feature;
};

struct QueryResult {
  std::string id;
  double embedded_distance = 0.0;
  std::optional<double> exact_orbit_distance;
  /// Certified factor E*C: sqrt(2) for the full maps. The reduced maps have
  /// no known lower constant, so this is +infinity for them.
  double approximation_bound = 0.0;
};

/// Immutable once constructed; queries may run concurrently.
class ShapeDatabase {
 public:
  struct Entry {
    std::string id;
    AnyMatrix matrix;
  };

  /// Records are stored sorted by id. Throws ShapeMismatch on a shape or
  /// field incompatible with the schema and ConfigInvalid on duplicate ids.
  ShapeDatabase(DatabaseSchema schema, std::vector<Entry> entries);

  const DatabaseSchema& schema() const { return schema_; }
  const std::vector<ShapeRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const ShapeRecord& find(std::string_view id) const;  // UnknownId
  FeatureVector feature_of(const AnyMatrix& m) const;
  double exact_distance(const AnyMatrix& a, const AnyMatrix& b) const;

  const KdTree& index() const { return index_; }

 private:
  void check_shape(const AnyMatrix& m) const;

  DatabaseSchema schema_;
  std::optional<ReducedEmbedding> reducer_;
  std::vector<ShapeRecord> records_;
  KdTree index_;
};

/// Record minimising the exact orbit distance; ties go to the smallest id.
QueryResult linear_scan_nearest(const ShapeDatabase& db, const AnyMatrix& query);

/// k nearest records by feature distance, nondecreasing; k larger than the
/// database returns every record.
std::vector<QueryResult> feature_nearest(const ShapeDatabase& db, const AnyMatrix& query, std::size_t k);

/// Same, with the query feature precomputed; FeatureMapMismatch if its
/// length does not match the database features.
std::vector<QueryResult> feature_nearest(const ShapeDatabase& db, const FeatureVector& query, std::size_t k);

/// Fills exact_orbit_distance.
QueryResult verify(const ShapeDatabase& db, QueryResult result, const AnyMatrix& query);

}  // namespace orbit
