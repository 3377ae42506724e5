#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "orbit/io.hpp"
#include "support.hpp"

using namespace orbit;
using namespace orbit::testing;
namespace fs = std::filesystem;

namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("orbit_test_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& contents) const {
    std::ofstream(path(name)) << contents;
    return path(name);
  }
  int cli(const std::vector<std::string>& args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

}  // namespace

TEST(Csv, ParsesWithCommentsAndBlankLines) {
  const RealMatrix m = parse_matrix_csv("# header\n1, 2,3\n\n4,5,+6e0\n");
  RealMatrix expected(2, 3);
  expected << 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(m, expected);
}

TEST(Csv, ErrorsCarryPosition) {
  const auto message = [](const std::string& text) {
    try {
      parse_matrix_csv(text);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::ParseError);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("1,2\n3,x\n").find("row 2, column 2"), std::string::npos);
  EXPECT_NE(message("1,2\n3\n").find("row 2"), std::string::npos);
  EXPECT_NE(message("1,nan\n").find("row 1, column 2"), std::string::npos);
  EXPECT_NE(message("1,inf\n").find("non-finite"), std::string::npos);
  EXPECT_NE(message("").find("no rows"), std::string::npos);
  EXPECT_NE(message("1,,2\n").find("column 2"), std::string::npos);
}

TEST(Csv, RoundTripIsExact) {
  std::mt19937_64 rng(81);
  const RealMatrix m = random_real(rng, 4, 5, 1e3);
  EXPECT_EQ(parse_matrix_csv(matrix_to_csv(m)), m);
  RealMatrix odd(1, 3);
  odd << 0.1, 1e-300, -123456789.123456789;
  EXPECT_EQ(parse_matrix_csv(matrix_to_csv(odd)), odd);
}

TEST(ComplexJson, RoundTrip) {
  std::mt19937_64 rng(82);
  const ComplexMatrix c = random_complex(rng, 2, 3);
  EXPECT_EQ(parse_complex_json(complex_to_json(c)), c);
  EXPECT_THROW(parse_complex_json(R"({"re": [[1, 2], [3]]})"), Error);
  EXPECT_THROW(parse_complex_json("[1, 2]"), Error);
}

TEST(DatabaseFormat, RoundTrip) {
  std::mt19937_64 rng(83);
  const DatabaseSchema schema{{Group::Unitary, 2}, 3, FeatureMap::Full};
  std::vector<ShapeDatabase::Entry> entries{{"a", random_complex(rng, 2, 3)}, {"b", random_real(rng, 2, 3)}};
  const DatabaseFile back = parse_database(database_to_jsonl(schema, entries));
  EXPECT_EQ(back.schema, schema);
  ASSERT_EQ(back.entries.size(), 2u);
  EXPECT_EQ(back.entries[0].id, "a");
  EXPECT_EQ(std::get<ComplexMatrix>(back.entries[0].matrix), std::get<ComplexMatrix>(entries[0].matrix));
}

TEST(DatabaseFormat, Errors) {
  EXPECT_THROW(parse_database(""), Error);
  EXPECT_THROW(parse_database("{\"group\": \"O\"}\n"), Error);
  const std::string header = R"({"group": "O", "n": 1, "l": 2, "feature_map": "full"})";
  EXPECT_NO_THROW(parse_database(header + "\n" + R"({"id": "x", "matrix": [[1, 2]]})" + "\n"));
  EXPECT_THROW(parse_database(header + "\n" + R"({"id": "x", "matrix": [[1, 2]]})" + "\n" +
                              R"({"id": "x", "matrix": [[3, 4]]})" + "\n"),
               Error);
  EXPECT_THROW(parse_database(header + "\n{not json\n"), Error);
}

TEST(FormatDouble, SignificantDigits) {
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(std::stod(format_double(0.1)), 0.1);
  EXPECT_EQ(format_double(2.0 / 3.0, 6), "0.666667");
}

TEST_F(TempDir, AtomicWriteReplaces) {
  const std::string p = path("f.txt");
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  EXPECT_EQ(read_text_file(p), "two");
  EXPECT_EQ(std::distance(fs::directory_iterator(dir_), fs::directory_iterator{}), 1);
}

TEST_F(TempDir, CliDist) {
  const std::string a = write("a.csv", "1,0,-1\n0,0,0\n");
  const std::string b = write("b.csv", "1,0,-1\n-0.01,0.02,-0.01\n");
  EXPECT_EQ(cli({"dist", "--group", "E2", a, b}), cli::kOk);
  EXPECT_NE(out_.str().find("distance 0.0244948974278"), std::string::npos) << out_.str();
  EXPECT_NE(out_.str().find("translation"), std::string::npos);
  EXPECT_EQ(cli({"dist", "--group", "O", a, b}), cli::kOk);
  EXPECT_EQ(out_.str().find("translation"), std::string::npos);

  const std::string bad = write("bad.csv", "1,0,x\n");
  EXPECT_EQ(cli({"dist", "--group", "E", a, bad}), cli::kParseError);
  EXPECT_NE(err_.str().find("row 1, column 3"), std::string::npos) << err_.str();
  EXPECT_EQ(cli({"dist", "--group", "E"}), cli::kParseError);
  EXPECT_EQ(cli({"frobnicate"}), cli::kParseError);

  const std::string wide = write("wide.csv", "1,0,-1,2\n0,0,0,3\n");
  EXPECT_EQ(cli({"dist", "--group", "E", a, wide}), cli::kShapeMismatch);
  EXPECT_EQ(cli({"dist", "--group", "E3", a, b}), cli::kShapeMismatch);
  const std::string cplx = write("c.json", R"({"re": [[1, 0, -1], [0, 0, 0]], "im": [[0, 1, 0], [0, 0, 0]]})");
  EXPECT_EQ(cli({"dist", "--group", "O", a, cplx}), cli::kShapeMismatch);
  EXPECT_EQ(cli({"dist", "--group", "U", a, cplx}), cli::kOk);
}

TEST_F(TempDir, CliEmbed) {
  const std::string tri = write("t.csv", "0,1,0.5\n0,0,0.8660254037844386\n");
  EXPECT_EQ(cli({"embed", "--group", "E", tri, "--map", "triangle"}), cli::kOk);
  const RealMatrix row = parse_matrix_csv(out_.str());
  ASSERT_EQ(row.cols(), 3);
  EXPECT_NEAR(row(0, 2), 1.0, 1e-12);

  const std::string out = path("feat.csv");
  EXPECT_EQ(cli({"embed", "--group", "O", tri, "--out", out}), cli::kOk);
  EXPECT_EQ(parse_matrix_csv(read_text_file(out)).cols(), 6);
  EXPECT_NE(read_text_file(out + ".json").find("\"dim\": 6"), std::string::npos);

  EXPECT_EQ(cli({"embed", "--group", "O", tri, "--reduced"}), cli::kDimensionHypothesis);
  const std::string line = write("line.csv", "1,2,3,4\n");
  EXPECT_EQ(cli({"embed", "--group", "O", line, "--reduced"}), cli::kOk);
  EXPECT_EQ(parse_matrix_csv(out_.str()).cols(), 7);
}

TEST_F(TempDir, CliDatabase) {
  const std::string db = path("db.jsonl");
  EXPECT_EQ(cli({"db-build", "--group", "E", "--out", db, "--random", "30", "--rows", "2", "--cols", "4", "--seed",
                 "5"}),
            cli::kOk);
  const std::string q = write("q.csv", "0.1,0.2,0.3,0.4\n1,-1,0,2\n");
  EXPECT_EQ(cli({"db-query", db, q, "-k", "3", "--verify"}), cli::kOk);
  std::istringstream lines(out_.str());
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "id,embedded_distance,exact_distance");
  int count = 0;
  for (std::string l; std::getline(lines, l);) ++count;
  EXPECT_EQ(count, 3);

  // deterministic database contents
  const std::string first = read_text_file(db);
  EXPECT_EQ(cli({"db-build", "--group", "E", "--out", db, "--random", "30", "--rows", "2", "--cols", "4", "--seed",
                 "5"}),
            cli::kOk);
  EXPECT_EQ(read_text_file(db), first);

  const std::string wrong = write("w.csv", "1,2,3\n4,5,6\n");
  EXPECT_EQ(cli({"db-query", db, wrong}), cli::kShapeMismatch);

  const std::string empty = path("empty.jsonl");
  EXPECT_EQ(cli({"db-build", "--group", "E", "--out", empty, "--rows", "2", "--cols", "4"}), cli::kOk);
  EXPECT_EQ(cli({"db-query", empty, q}), cli::kEmptyDatabase);

  EXPECT_EQ(cli({"db-build", "--group", "O", "--reduced", "--out", path("r.jsonl"), "--random", "3", "--rows", "2",
                 "--cols", "3"}),
            cli::kDimensionHypothesis);
}

TEST_F(TempDir, CliExperiment) {
  const std::string cfg = write("cfg.json", R"({"n_pairs": 500, "seed": 3})");
  EXPECT_EQ(cli({"experiment", "distortion", "--config", cfg, "--out", dir_.string()}), cli::kOk);
  const std::string report = read_text_file(path("distortion.json"));
  EXPECT_TRUE(fs::exists(path("distortion.csv")));
  EXPECT_EQ(cli({"experiment", "distortion", "--config", cfg, "--out", dir_.string(), "--threads", "3"}), cli::kOk);
  EXPECT_EQ(read_text_file(path("distortion.json")), report);

  const std::string bad = write("bad.json", R"({"n_pairs": 0})");
  EXPECT_EQ(cli({"experiment", "distortion", "--config", bad, "--out", dir_.string()}), cli::kInvalidConfig);
  const std::string unknown = write("unknown.json", R"({"pairs": 10})");
  EXPECT_EQ(cli({"experiment", "distortion", "--config", unknown, "--out", dir_.string()}), cli::kInvalidConfig);
  EXPECT_EQ(cli({"experiment", "nonsense"}), cli::kInvalidConfig);
}
