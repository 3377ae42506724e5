#include "cli.hpp"

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "orbit/bench.hpp"
#include "orbit/embed.hpp"
#include "orbit/io.hpp"
#include "orbit/metrics.hpp"
#include "orbit/reduce.hpp"
#include "orbit/search.hpp"
#include "orbit/triangle.hpp"

namespace orbit::cli {

namespace {

namespace fs = std::filesystem;

std::string fmt12(double v) { return format_double(v, 12); }

std::string fmt12(const Complex& z) {
  if (z.imag() == 0.0) return fmt12(z.real());
  std::string im = fmt12(std::abs(z.imag()));
  return fmt12(z.real()) + (z.imag() < 0.0 ? "-" : "+") + im + "i";
}

template <typename Scalar>
void print_rows(std::ostream& out, const Matrix<Scalar>& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << (c ? "," : "") << fmt12(m(r, c));
    out << "\n";
  }
}

Eigen::Index rows_of(const AnyMatrix& m) {
  return std::visit([](const auto& x) { return x.rows(); }, m);
}
Eigen::Index cols_of(const AnyMatrix& m) {
  return std::visit([](const auto& x) { return x.cols(); }, m);
}

const RealMatrix& require_real(const AnyMatrix& m, Group g) {
  if (const auto* r = std::get_if<RealMatrix>(&m)) return *r;
  throw Error(ErrorCode::FieldMismatch, "group " + std::string(to_string(g)) + " needs a real (CSV) matrix");
}

ComplexMatrix promote(const AnyMatrix& m) {
  if (const auto* r = std::get_if<RealMatrix>(&m)) return to_complex(*r);
  return std::get<ComplexMatrix>(m);
}

GroupAction resolve_group(const std::string& text, const AnyMatrix& sample) {
  GroupAction g = parse_group(text);
  const int rows = static_cast<int>(rows_of(sample));
  if (g.n != 0 && g.n != rows) {
    throw Error(ErrorCode::ShapeMismatch, "group dimension " + std::to_string(g.n) + " but the matrix has " +
                                              std::to_string(rows) + " rows");
  }
  g.n = rows;
  return g;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return kParseError;
    case ErrorCode::ShapeMismatch:
    case ErrorCode::FieldMismatch:
    case ErrorCode::FeatureMapMismatch: return kShapeMismatch;
    case ErrorCode::DimensionHypothesis: return kDimensionHypothesis;
    case ErrorCode::EmptyDatabase: return kEmptyDatabase;
    case ErrorCode::ConfigInvalid: return kInvalidConfig;
    default: return kFailure;
  }
}

// dist ---------------------------------------------------------------------

struct DistArgs {
  std::string group = "O";
  std::string file_a;
  std::string file_b;
};

template <typename Scalar>
void print_alignment(std::ostream& out, const OrbitDistance<Scalar>& r, bool translation) {
  out << "distance " << fmt12(r.distance) << "\n";
  out << "rotation\n";
  print_rows(out, r.alignment.rotation);
  if (translation) {
    out << "translation\n";
    print_rows<Scalar>(out, r.alignment.translation.transpose());
  }
}

int cmd_dist(const DistArgs& args, std::ostream& out) {
  const AnyMatrix a = read_matrix_file(args.file_a);
  const AnyMatrix b = read_matrix_file(args.file_b);
  const GroupAction g = resolve_group(args.group, a);
  if (rows_of(a) != rows_of(b) || cols_of(a) != cols_of(b)) {
    throw Error(ErrorCode::ShapeMismatch, "matrices differ in shape");
  }
  out << "group " << to_string(g.kind) << g.n << "\n";
  switch (g.kind) {
    case Group::Orthogonal:
      print_alignment(out, dist_orthogonal(require_real(a, g.kind), require_real(b, g.kind)), false);
      break;
    case Group::Euclidean:
      print_alignment(out, dist_euclidean(require_real(a, g.kind), require_real(b, g.kind)), true);
      break;
    case Group::Unitary: print_alignment(out, dist_unitary(promote(a), promote(b)), false); break;
    case Group::ComplexEuclidean:
      print_alignment(out, dist_complex_euclidean(promote(a), promote(b)), true);
      break;
  }
  return kOk;
}

// embed --------------------------------------------------------------------

struct EmbedArgs {
  std::string group = "O";
  std::string file;
  bool reduced = false;
  std::string map;  // "", "full", "reduced" or "triangle"
  std::string out;
};

std::string map_name(Group g, bool reduced) {
  std::string base;
  switch (g) {
    case Group::Orthogonal: base = "phi"; break;
    case Group::Euclidean: base = "psi"; break;
    case Group::Unitary: base = "phi_c"; break;
    case Group::ComplexEuclidean: base = "psi_c"; break;
  }
  return reduced ? "reduced_" + base : base;
}

int cmd_embed(const EmbedArgs& args, std::ostream& out) {
  const AnyMatrix a = read_matrix_file(args.file);
  const GroupAction g = resolve_group(args.group, a);
  const int l = static_cast<int>(cols_of(a));

  std::string mode = args.map.empty() ? (args.reduced ? "reduced" : "full") : args.map;
  if (args.reduced && mode != "reduced") {
    throw Error(ErrorCode::ConfigInvalid, "--reduced conflicts with --map " + mode);
  }
  FeatureVector feature;
  std::string name;
  if (mode == "triangle") {
    if (g.kind != Group::Euclidean) throw Error(ErrorCode::ConfigInvalid, "the triangle map is for group E");
    const RealMatrix& m = require_real(a, g.kind);
    if (m.rows() != 2 || m.cols() != 3) throw Error(ErrorCode::ShapeMismatch, "the triangle map needs a 2x3 matrix");
    feature.coords = psi_triangle(Triangle(m)).vec();
    name = "psi_triangle";
  } else if (mode == "reduced") {
    feature = ReducedEmbedding(g, l)(a);
    name = map_name(g.kind, true);
  } else if (mode == "full") {
    feature = full_feature(g.kind, a);
    name = map_name(g.kind, false);
  } else {
    throw Error(ErrorCode::ConfigInvalid, "unknown map '" + mode + "'");
  }

  std::string row;
  for (Eigen::Index i = 0; i < feature.coords.size(); ++i) {
    row += (i ? "," : "") + format_double(feature.coords(i));
  }
  row += "\n";

  if (args.out.empty()) {
    out << row;
    return kOk;
  }
  nlohmann::ordered_json meta;
  meta["map"] = name;
  meta["group"] = std::string(to_string(g.kind));
  meta["n"] = g.n;
  meta["l"] = l;
  meta["dim"] = feature.ambient_dim();
  write_file_atomic(args.out, row);
  write_file_atomic(args.out + ".json", meta.dump(2) + "\n");
  out << "wrote " << feature.ambient_dim() << " coordinates (" << name << ") to " << args.out << "\n";
  return kOk;
}

// db-build / db-query ----------------------------------------------------------

struct DbBuildArgs {
  std::string group = "O";
  bool reduced = false;
  std::string out;
  std::vector<std::string> files;
  std::size_t random = 0;
  int rows = 0;
  int cols = 0;
  std::uint64_t seed = 0;
};

int cmd_db_build(const DbBuildArgs& args, std::ostream& out) {
  std::vector<ShapeDatabase::Entry> entries;
  for (const auto& f : args.files) entries.push_back({fs::path(f).stem().string(), read_matrix_file(f)});

  GroupAction g = parse_group(args.group);
  if (!entries.empty()) {
    g = resolve_group(args.group, entries.front().matrix);
  } else if (args.rows > 0) {
    g.n = args.rows;
  }
  int l = entries.empty() ? args.cols : static_cast<int>(cols_of(entries.front().matrix));

  if (args.random > 0) {
    if (g.n <= 0 || l <= 0) throw Error(ErrorCode::ConfigInvalid, "--random needs --rows and --cols");
    if (args.rows > 0 && args.rows != g.n) throw Error(ErrorCode::ShapeMismatch, "--rows disagrees with the files");
    if (args.cols > 0 && args.cols != l) throw Error(ErrorCode::ShapeMismatch, "--cols disagrees with the files");
    const int width = static_cast<int>(std::to_string(args.random - 1).size());
    for (std::size_t i = 0; i < args.random; ++i) {
      auto rng = bench::trial_rng(args.seed, 5, i);
      std::normal_distribution<double> gauss;
      std::ostringstream id;
      id << "r" << std::setw(width) << std::setfill('0') << i;
      if (is_complex_group(g.kind)) {
        ComplexMatrix m(g.n, l);
        for (Eigen::Index c = 0; c < l; ++c)
          for (Eigen::Index r = 0; r < g.n; ++r) {
            const double re = gauss(rng);
            m(r, c) = Complex(re, gauss(rng));
          }
        entries.push_back({id.str(), m});
      } else {
        RealMatrix m(g.n, l);
        for (Eigen::Index c = 0; c < l; ++c)
          for (Eigen::Index r = 0; r < g.n; ++r) m(r, c) = gauss(rng);
        entries.push_back({id.str(), m});
      }
    }
  }
  if (g.n <= 0 || l <= 0) {
    throw Error(ErrorCode::ConfigInvalid, "cannot infer the configuration shape; pass files or --rows/--cols");
  }

  const DatabaseSchema schema{g, l, args.reduced ? FeatureMap::Reduced : FeatureMap::Full};
  // builds features and validates shapes, ids and the dimension hypothesis
  const ShapeDatabase db(schema, entries);
  std::vector<ShapeDatabase::Entry> sorted;
  sorted.reserve(db.size());
  for (const auto& r : db.records()) sorted.push_back({r.id, r.matrix});
  write_file_atomic(args.out, database_to_jsonl(schema, sorted));
  out << "wrote " << db.size() << " records (" << to_string(g.kind) << g.n << ", l=" << l << ", "
      << to_string(schema.feature_map) << " features) to " << args.out << "\n";
  return kOk;
}

struct DbQueryArgs {
  std::string db_file;
  std::string query_file;
  std::size_t k = 1;
  bool verify = false;
};

int cmd_db_query(const DbQueryArgs& args, std::ostream& out) {
  const ShapeDatabase db = load_database(args.db_file);
  const AnyMatrix query = read_matrix_file(args.query_file);
  if (db.empty()) throw Error(ErrorCode::EmptyDatabase, "database '" + args.db_file + "' has no records");
  auto results = feature_nearest(db, query, args.k);
  out << "id,embedded_distance" << (args.verify ? ",exact_distance" : "") << "\n";
  for (auto& r : results) {
    if (args.verify) r = verify(db, r, query);
    out << r.id << "," << fmt12(r.embedded_distance);
    if (args.verify) out << "," << fmt12(*r.exact_orbit_distance);
    out << "\n";
  }
  return kOk;
}

// experiment ---------------------------------------------------------------

struct ExperimentArgs {
  std::string kind;
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string out = ".";
  std::optional<unsigned> threads;
};

int cmd_experiment(const ExperimentArgs& args, std::ostream& out) {
  const auto kind = bench::parse_experiment_kind(args.kind);
  bench::ExperimentConfig cfg =
      args.config.empty() ? bench::default_config(kind) : bench::config_from_json(read_text_file(args.config), kind);
  if (args.seed) cfg.seed = *args.seed;
  if (args.threads) cfg.threads = *args.threads;
  bench::validate(cfg, kind);

  const auto report = bench::run(kind, cfg);
  fs::create_directories(args.out);
  const fs::path base = fs::path(args.out) / std::string(bench::to_string(kind));
  write_file_atomic(base.string() + ".json", bench::report_json(report));
  write_file_atomic(base.string() + ".csv", bench::report_csv(report));

  out << "experiment " << bench::to_string(kind) << " seed " << cfg.seed << "\n";
  if (!report.ratios.empty()) {
    out << std::left << std::setw(14) << "map" << std::setw(10) << "count" << std::setw(12) << "min"
        << std::setw(12) << "max" << std::setw(12) << "mean" << "stddev\n";
    for (const auto& r : report.ratios) {
      out << std::left << std::setw(14) << r.map << std::setw(10) << r.count << std::setw(12)
          << format_double(r.min, 6) << std::setw(12) << format_double(r.max, 6) << std::setw(12)
          << format_double(r.mean, 6) << format_double(r.stddev, 6) << "\n";
    }
  }
  if (!report.rates.empty()) {
    out << std::left << std::setw(14) << "map" << std::setw(10) << "noise" << "rate\n";
    for (const auto& e : report.rates) {
      out << std::left << std::setw(14) << e.map << std::setw(10) << format_double(e.noise, 6)
          << format_double(e.rate, 6) << "\n";
    }
  }
  out << "wrote " << base.string() << ".json and " << base.string() << ".csv\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orbit distances and bi-Lipschitz invariant features"};
  app.require_subcommand(1);

  DistArgs dist;
  auto* dist_cmd = app.add_subcommand("dist", "orbit distance and optimal alignment of two configurations");
  dist_cmd->add_option("--group", dist.group, "O, E, U or F, optionally with the dimension (E2)")->required();
  dist_cmd->add_option("file_a", dist.file_a)->required();
  dist_cmd->add_option("file_b", dist.file_b)->required();

  EmbedArgs embed;
  auto* embed_cmd = app.add_subcommand("embed", "invariant feature vector of a configuration");
  embed_cmd->add_option("--group", embed.group)->required();
  embed_cmd->add_option("file", embed.file)->required();
  embed_cmd->add_flag("--reduced", embed.reduced, "dimension-reduced map (needs l >= 2n)");
  embed_cmd->add_option("--map", embed.map, "full, reduced or triangle");
  embed_cmd->add_option("--out", embed.out, "CSV output; a .json sidecar is written next to it");

  DbBuildArgs build;
  auto* build_cmd = app.add_subcommand("db-build", "build a shape database (JSON lines)");
  build_cmd->add_option("--group", build.group)->required();
  build_cmd->add_flag("--reduced", build.reduced);
  build_cmd->add_option("--out", build.out)->required();
  build_cmd->add_option("--random", build.random, "append N random Gaussian configurations");
  build_cmd->add_option("--rows", build.rows, "n for --random");
  build_cmd->add_option("--cols", build.cols, "l for --random");
  build_cmd->add_option("--seed", build.seed);
  build_cmd->add_option("files", build.files, "matrix files; ids are the file stems");

  DbQueryArgs query;
  auto* query_cmd = app.add_subcommand("db-query", "nearest orbits of a query configuration");
  query_cmd->add_option("db_file", query.db_file)->required();
  query_cmd->add_option("query_file", query.query_file)->required();
  query_cmd->add_option("-k", query.k)->check(CLI::PositiveNumber);
  query_cmd->add_flag("--verify", query.verify, "also print the exact orbit distance");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "run a seeded experiment");
  exp_cmd->add_option("kind", exp.kind, "distortion, classify or lower-constant")->required();
  exp_cmd->add_option("--seed", exp.seed);
  exp_cmd->add_option("--config", exp.config);
  exp_cmd->add_option("--out", exp.out, "output directory");
  exp_cmd->add_option("--threads", exp.threads);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  try {
    if (dist_cmd->parsed()) return cmd_dist(dist, out);
    if (embed_cmd->parsed()) return cmd_embed(embed, out);
    if (build_cmd->parsed()) return cmd_db_build(build, out);
    if (query_cmd->parsed()) return cmd_db_query(query, out);
    if (exp_cmd->parsed()) return cmd_experiment(exp, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace orbit::cli
