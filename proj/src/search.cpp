#include "orbit/search.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace orbit {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;

double bound_for(FeatureMap map) {
  return map == FeatureMap::Full ? kSqrt2 : std::numeric_limits<double>::infinity();
}

}  // namespace

std::string_view to_string(FeatureMap m) { return m == FeatureMap::Full ? "full" : "reduced"; }

FeatureMap parse_feature_map(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "full") return FeatureMap::Full;
  if (lower == "reduced") return FeatureMap::Reduced;
  throw Error(ErrorCode::ConfigInvalid, "unknown feature map '" + std::string(text) + "'");
}

ShapeDatabase::ShapeDatabase(DatabaseSchema schema, std::vector<Entry> entries) : schema_(schema) {
  if (schema_.group.n <= 0 || schema_.l <= 0) {
    throw Error(ErrorCode::ConfigInvalid, "database schema needs positive n and l");
  }
  if (schema_.feature_map == FeatureMap::Reduced) reducer_.emplace(schema_.group, schema_.l);

  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].id == entries[i - 1].id) {
      throw Error(ErrorCode::ConfigInvalid, "duplicate record id '" + entries[i].id + "'");
    }
  }

  records_.reserve(entries.size());
  for (auto& e : entries) {
    check_shape(e.matrix);
    FeatureVector f = feature_of(e.matrix);
    records_.push_back({std::move(e.id), std::move(e.matrix), std::move(f)});
  }

  const Eigen::Index dim = schema_.feature_map == FeatureMap::Full
                               ? static_cast<Eigen::Index>(full_feature_dim(schema_.group.kind, schema_.l))
                               : static_cast<Eigen::Index>(reducer_->dim());
  RealMatrix points(dim, static_cast<Eigen::Index>(records_.size()));
  for (std::size_t i = 0; i < records_.size(); ++i) {
    points.col(static_cast<Eigen::Index>(i)) = records_[i].feature.coords;
  }
  index_ = KdTree(std::move(points));
}

void ShapeDatabase::check_shape(const AnyMatrix& m) const {
  const auto [rows, cols] = std::visit([](const auto& x) { return std::pair{x.rows(), x.cols()}; }, m);
  if (rows != schema_.group.n || cols != schema_.l) {
    throw Error(ErrorCode::ShapeMismatch, "configuration is " + std::to_string(rows) + "x" + std::to_string(cols) +
                                              ", database holds " + std::to_string(schema_.group.n) + "x" +
                                              std::to_string(schema_.l));
  }
  if (!is_complex_group(schema_.group.kind) && std::holds_alternative<ComplexMatrix>(m)) {
    throw Error(ErrorCode::FieldMismatch, "complex configuration in a real-group database");
  }
}

const ShapeRecord& ShapeDatabase::find(std::string_view id) const {
  auto it = std::lower_bound(records_.begin(), records_.end(), id,
                             [](const ShapeRecord& r, std::string_view key) { return r.id < key; });
  if (it == records_.end() || it->id != id) {
    throw Error(ErrorCode::UnknownId, "no record with id '" + std::string(id) + "'");
  }
  return *it;
}

FeatureVector ShapeDatabase::feature_of(const AnyMatrix& m) const {
  check_shape(m);
  if (reducer_) return (*reducer_)(m);
  return full_feature(schema_.group.kind, m);
}

double ShapeDatabase::exact_distance(const AnyMatrix& a, const AnyMatrix& b) const {
  return orbit_distance(schema_.group.kind, a, b);
}

QueryResult linear_scan_nearest(const ShapeDatabase& db, const AnyMatrix& query) {
  if (db.empty()) throw Error(ErrorCode::EmptyDatabase, "database has no records");
  const FeatureVector qf = db.feature_of(query);
  std::size_t best = 0;
  double best_distance = std::numeric_limits<double>::infinity();
  // records are sorted by id, so strict < keeps the smallest id on ties
  for (std::size_t i = 0; i < db.size(); ++i) {
    const double d = db.exact_distance(query, db.records()[i].matrix);
    if (d < best_distance) {
      best_distance = d;
      best = i;
    }
  }
  const auto& rec = db.records()[best];
  return {rec.id, qf.distance_to(rec.feature), best_distance, bound_for(db.schema().feature_map)};
}

std::vector<QueryResult> feature_nearest(const ShapeDatabase& db, const FeatureVector& query, std::size_t k) {
  if (db.empty()) throw Error(ErrorCode::EmptyDatabase, "database has no records");
  if (k == 0) throw Error(ErrorCode::ConfigInvalid, "k must be at least 1");
  if (static_cast<Eigen::Index>(query.ambient_dim()) != db.index().dim()) {
    throw Error(ErrorCode::FeatureMapMismatch, "query feature has length " + std::to_string(query.ambient_dim()) +
                                                   ", database features have " +
                                                   std::to_string(db.index().dim()));
  }
  std::vector<QueryResult> out;
  for (const auto& nb : db.index().nearest(query.coords, k)) {
    out.push_back({db.records()[nb.index].id, nb.distance, std::nullopt, bound_for(db.schema().feature_map)});
  }
  return out;
}

std::vector<QueryResult> feature_nearest(const ShapeDatabase& db, const AnyMatrix& query, std::size_t k) {
  if (db.empty()) throw Error(ErrorCode::EmptyDatabase, "database has no records");
  return feature_nearest(db, db.feature_of(query), k);
}

QueryResult verify(const ShapeDatabase& db, QueryResult result, const AnyMatrix& query) {
  const auto& rec = db.find(result.id);
  result.exact_orbit_distance = db.exact_distance(query, rec.matrix);
  return result;
}

}  // namespace orbit
