#include "orbit/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace orbit {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

RealMatrix matrix_from_rows(const json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty()) parse_fail(where + ": expected a nonempty array of rows");
  const std::size_t cols = rows.front().is_array() ? rows.front().size() : 0;
  if (cols == 0) parse_fail(where + ": expected nonempty rows");
  RealMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (!row.is_array() || row.size() != cols) {
      parse_fail(where + ": row " + std::to_string(r + 1) + " has " +
                 std::to_string(row.is_array() ? row.size() : 0) + " entries, expected " + std::to_string(cols));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!row[c].is_number()) {
        parse_fail(where + ": row " + std::to_string(r + 1) + ", column " + std::to_string(c + 1) +
                   " is not a number");
      }
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].get<double>();
    }
  }
  return m;
}

json rows_of(const RealMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

ComplexMatrix complex_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("re")) parse_fail(where + ": expected an object with \"re\" and \"im\"");
  const RealMatrix re = matrix_from_rows(j.at("re"), where + " re");
  RealMatrix im = RealMatrix::Zero(re.rows(), re.cols());
  if (j.contains("im")) {
    im = matrix_from_rows(j.at("im"), where + " im");
    if (im.rows() != re.rows() || im.cols() != re.cols()) parse_fail(where + ": re and im differ in shape");
  }
  ComplexMatrix m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  return m;
}

json complex_json(const ComplexMatrix& m) {
  json j;
  j["re"] = rows_of(m.real());
  j["im"] = rows_of(m.imag());
  return j;
}

}  // namespace

std::string format_double(double value, int significant_digits) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, significant_digits);
  if (ec != std::errc()) return std::to_string(value);
  return std::string(buf, ptr);
}

RealMatrix parse_matrix_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty()) continue;
    if (line.front() == '#') continue;

    std::vector<double> row;
    std::size_t field_start = 0;
    std::size_t col = 0;
    while (field_start <= line.size()) {
      auto comma = line.find(',', field_start);
      if (comma == std::string_view::npos) comma = line.size();
      const auto field = trim(line.substr(field_start, comma - field_start));
      ++col;
      double value = 0.0;
      const char* first = field.data();
      if (!field.empty() && field.front() == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, field.data() + field.size(), value);
      if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
        parse_fail("row " + std::to_string(line_no) + ", column " + std::to_string(col) + ": cannot parse '" +
                   std::string(field) + "' as a number");
      }
      if (!std::isfinite(value)) {
        parse_fail("row " + std::to_string(line_no) + ", column " + std::to_string(col) + ": non-finite value");
      }
      row.push_back(value);
      field_start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      parse_fail("row " + std::to_string(line_no) + " has " + std::to_string(row.size()) + " columns, expected " +
                 std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) parse_fail("matrix file has no rows");
  RealMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return m;
}

std::string matrix_to_csv(const RealMatrix& m) {
  std::string out;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      out += format_double(m(r, c));
    }
    out += '\n';
  }
  return out;
}

ComplexMatrix parse_complex_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    parse_fail(std::string("invalid JSON: ") + e.what());
  }
  const ComplexMatrix m = complex_from_json(j, "complex matrix");
  if (!m.allFinite()) parse_fail("complex matrix has non-finite entries");
  return m;
}

std::string complex_to_json(const ComplexMatrix& m) { return complex_json(m).dump() + "\n"; }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) parse_fail("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + tmp.string() + "'");
    out << contents;
    if (!out.flush()) throw Error(ErrorCode::ParseError, "write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

AnyMatrix read_matrix_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    if (path.extension() == ".json") return parse_complex_json(text);
    return parse_matrix_csv(text);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) parse_fail(path.string() + ": " + e.what());
    throw;
  }
}

void write_matrix_file(const std::filesystem::path& path, const AnyMatrix& m) {
  if (const auto* r = std::get_if<RealMatrix>(&m)) {
    write_file_atomic(path, matrix_to_csv(*r));
  } else {
    write_file_atomic(path, complex_to_json(std::get<ComplexMatrix>(m)));
  }
}

DatabaseFile parse_database(std::string_view text) {
  DatabaseFile out;
  bool have_header = false;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "database line " + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      parse_fail(where + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) parse_fail(where + ": expected an object");
    try {
      if (!have_header) {
        if (!j.contains("group")) parse_fail(where + ": the first line must be the header");
        const GroupAction g = parse_group(j.at("group").get<std::string>());
        out.schema.group.kind = g.kind;
        out.schema.group.n = j.contains("n") ? j.at("n").get<int>() : g.n;
        out.schema.l = j.at("l").get<int>();
        out.schema.feature_map =
            parse_feature_map(j.contains("feature_map") ? j.at("feature_map").get<std::string>() : "full");
        if (out.schema.group.n <= 0 || out.schema.l <= 0) parse_fail(where + ": n and l must be positive");
        have_header = true;
        continue;
      }
      std::string id = j.at("id").get<std::string>();
      if (!seen.insert(id).second) parse_fail(where + ": duplicate id '" + id + "'");
      const json& mj = j.at("matrix");
      AnyMatrix m;
      if (mj.is_object()) m = complex_from_json(mj, where);
      else m = matrix_from_rows(mj, where);
      out.entries.push_back({std::move(id), std::move(m)});
    } catch (const json::exception& e) {
      parse_fail(where + ": " + e.what());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ConfigInvalid) parse_fail(where + ": " + e.what());
      throw;
    }
  }
  if (!have_header) parse_fail("database has no header line");
  return out;
}

std::string database_to_jsonl(const DatabaseSchema& schema, const std::vector<ShapeDatabase::Entry>& entries) {
  json header;
  header["group"] = std::string(to_string(schema.group.kind));
  header["n"] = schema.group.n;
  header["l"] = schema.l;
  header["feature_map"] = std::string(to_string(schema.feature_map));
  std::string out = header.dump() + "\n";
  for (const auto& e : entries) {
    json line;
    line["id"] = e.id;
    if (const auto* r = std::get_if<RealMatrix>(&e.matrix)) line["matrix"] = rows_of(*r);
    else line["matrix"] = complex_json(std::get<ComplexMatrix>(e.matrix));
    out += line.dump() + "\n";
  }
  return out;
}

ShapeDatabase load_database(const std::filesystem::path& path) {
  DatabaseFile file = parse_database(read_text_file(path));
  return ShapeDatabase(file.schema, std::move(file.entries));
}

std::string reducer_to_json(const ReducerBasis& basis) {
  json j;
  j["rank"] = basis.rank;
  j["size"] = basis.size;
  j["ambient"] = std::string(to_string(basis.ambient));
  j["dim"] = basis.dim();
  // one array per basis vector
  j["basis"] = rows_of(basis.basis.transpose());
  return j.dump() + "\n";
}

ReducerBasis reducer_from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    ReducerBasis b;
    b.rank = j.at("rank").get<int>();
    b.size = j.at("size").get<int>();
    const auto ambient = j.at("ambient").get<std::string>();
    if (ambient == "symmetric") b.ambient = Ambient::Symmetric;
    else if (ambient == "hermitian") b.ambient = Ambient::Hermitian;
    else parse_fail("unknown ambient '" + ambient + "'");
    const auto dim = j.at("dim").get<std::size_t>();
    const Eigen::Index coords = b.ambient == Ambient::Symmetric ? b.size * (b.size + 1) / 2 : b.size * b.size;
    if (dim == 0) {
      b.basis = RealMatrix(coords, 0);
    } else {
      b.basis = matrix_from_rows(j.at("basis"), "reducer basis").transpose();
    }
    if (b.dim() != dim || b.basis.rows() != coords) parse_fail("reducer basis has inconsistent dimensions");
    return b;
  } catch (const json::exception& e) {
    parse_fail(std::string("invalid reducer JSON: ") + e.what());
  }
}

}  // namespace orbit
