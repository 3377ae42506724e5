#pragma once

// File formats.
//
//   real matrix     CSV, one row per line, comma separated, 17 significant digits
//   complex matrix  JSON {"re": [[...]], "im": [[...]]}
//   database        JSON lines; first line {"group", "n", "l", "feature_map"},
//                   then one {"id", "matrix"} object per record, where
//                   "matrix" is a nested array or a {"re", "im"} object
//   reducer basis   JSON {"rank", "size", "ambient", "dim", "basis"}

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "orbit/matcore.hpp"
#include "orbit/reduce.hpp"
#include "orbit/search.hpp"

namespace orbit {

std::string format_double(double value, int significant_digits = 17);

RealMatrix parse_matrix_csv(std::string_view text);
std::string matrix_to_csv(const RealMatrix& m);

ComplexMatrix parse_complex_json(std::string_view text);
std::string complex_to_json(const ComplexMatrix& m);

/// ".json" files are complex matrices, anything else is CSV.
AnyMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const AnyMatrix& m);

std::string read_text_file(const std::filesystem::path& path);
/// Writes to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

struct DatabaseFile {
  DatabaseSchema schema;
  std::vector<ShapeDatabase::Entry> entries;
};

DatabaseFile parse_database(std::string_view text);
std::string database_to_jsonl(const DatabaseSchema& schema, const std::vector<ShapeDatabase::Entry>& entries);
ShapeDatabase load_database(const std::filesystem::path& path);

std::string reducer_to_json(const ReducerBasis& basis);
ReducerBasis reducer_from_json(std::string_view text);

}  // namespace orbit
