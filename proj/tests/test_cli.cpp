#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "doctest.h"

#include "opineq/cli.hpp"
#include "opineq/error.hpp"
#include "opineq/generators.hpp"
#include "opineq/linalg.hpp"
#include "opineq/matrix_file.hpp"
#include "opineq/report.hpp"
#include "test_util.hpp"

using namespace opineq;
using testutil::data_file;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
  const auto dir = std::filesystem::temp_directory_path() / "opineq_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << contents;
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("matrix file round trip") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const Matrix m = gaussian_matrix(1 + seed % 5, 1 + seed % 3, rng) * Complex(std::pow(10.0, int(seed % 9) - 4));
    CHECK(parse_matrix(serialize_matrix(m)) == m);
  }
  const Matrix odd = Matrix::from_rows({{Complex(0.1, -1e-300), Complex(1e300, 5e-324)}});
  CHECK(parse_matrix(serialize_matrix(odd)) == odd);

  const auto path = std::filesystem::temp_directory_path() / "opineq_tests" / "roundtrip.txt";
  std::filesystem::create_directories(path.parent_path());
  write_matrix_file(path, testutil::example_matrix());
  CHECK(read_matrix_file(path) == testutil::example_matrix());
  CHECK(read_matrix_file(data_file("example_ab_normal.txt")) == testutil::example_matrix());
}

TEST_CASE("matrix file errors name the line") {
  auto message = [](std::string_view text) {
    try {
      parse_matrix(text, "m.txt");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Parse);
      return std::string(e.what());
    }
    FAIL("expected a parse error");
    return std::string();
  };
  CHECK(message("# header\n2 2\n1 0 0 0\n1 0 x 0\n").starts_with("m.txt:4:"));
  CHECK(message("2 two\n").starts_with("m.txt:1:"));
  CHECK(message("\n\n1 1\n1\n").starts_with("m.txt:4:"));
  CHECK(message("1 1\n1 0 2 0\n").starts_with("m.txt:2:"));
  CHECK(message("").starts_with("m.txt:"));
  CHECK(message("1 1\nnan 0\n").starts_with("m.txt:2:"));
}

TEST_CASE("complex flag parsing") {
  CHECK(parse_complex("2") == Complex(2, 0));
  CHECK(parse_complex("-1.5") == Complex(-1.5, 0));
  CHECK(parse_complex("i") == Complex(0, 1));
  CHECK(parse_complex("-2i") == Complex(0, -2));
  CHECK(parse_complex("1+1i") == Complex(1, 1));
  CHECK(parse_complex("1-0.5j") == Complex(1, -0.5));
  CHECK(parse_complex("1,1") == Complex(1, 1));
  CHECK(parse_complex("1e-3+2e+1i") == Complex(1e-3, 20));
  CHECK_FALSE(parse_complex("").has_value());
  CHECK_FALSE(parse_complex("abc").has_value());
  CHECK_FALSE(parse_complex("inf").has_value());
}

TEST_CASE("analyze") {
  const auto r = run({"analyze", data_file("example_ab_normal.txt"), "--json"});
  CHECK(r.code == kExitOk);
  const auto doc = parse_report(r.out);
  REQUIRE(doc.profile.has_value());
  CHECK(std::abs(*doc.profile->alpha_sq - testutil::kAlphaSq) < 1e-9);
  CHECK(doc.profile->is_ab_normal);
  CHECK(doc.command == "analyze");
  CHECK(doc.input_digest.size() == 64);
  CHECK(doc.factorizations.size() == 2);

  const auto z = run({"analyze", data_file("zero2.txt"), "--json"});
  CHECK(z.code == kExitOk);
  const auto zd = parse_report(z.out);
  CHECK(zd.profile->numerical_radius == 0.0);
  CHECK_FALSE(zd.profile->alpha_sq.has_value());

  const auto text = run({"analyze", data_file("example_ab_normal.txt")});
  CHECK(text.code == kExitOk);
  CHECK(text.out.find("alpha") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  const auto bad = temp_file("bad.txt", "2 2\n1 0 0 0\n1 0 oops 0\n");
  auto r = run({"analyze", bad.string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("bad.txt:3:") != std::string::npos);

  CHECK(run({"analyze", "/nonexistent/file.txt"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"verify", data_file("identity2.txt"), "--theorem", "NOPE"}).code == kExitUsage);
  CHECK(run({"verify", data_file("identity2.txt"), "--mode", "sideways"}).code == kExitUsage);
  CHECK(run({"verify", data_file("identity2.txt"), "--theorem", "DS_LOWER", "--p", "3"}).code == kExitUsage);
  CHECK(run({"verify", data_file("identity2.txt"), "--lambda", "zz"}).code == kExitUsage);
  CHECK(run({"sweep", "--count", "0"}).code == kExitUsage);
  CHECK(run({"sweep", "--kind", "hyponormal"}).code == kExitUsage);
  CHECK(run({"analyze", data_file("identity2.txt"), "--tol-psd", "-1"}).code == kExitUsage);
  const auto rect = temp_file("rect.txt", "2 3\n1 0 0 0 0 0\n0 0 1 0 0 0\n");
  CHECK(run({"analyze", rect.string()}).code == kExitUsage);
  CHECK(run({"verify", rect.string()}).code == kExitUsage);
}

TEST_CASE("verify exit codes") {
  const std::string id = data_file("identity2.txt");
  auto r = run({"verify", id, "--theorem", "PARALLELOGRAM_POWER", "--mode", "printed", "--p", "2", "--json"});
  CHECK(r.code == kExitViolation);
  auto doc = parse_report(r.out);
  REQUIRE(doc.reports.size() == 1);
  CHECK_FALSE(doc.reports[0].passed);
  CHECK(doc.reports[0].witness.has_value());

  r = run({"verify", id, "--theorem", "PARALLELOGRAM_POWER", "--mode", "corrected", "--p", "2"});
  CHECK(r.code == kExitOk);

  r = run({"verify", data_file("example_ab_normal.txt"), "--theorem", "BUZANO_RADIUS"});
  CHECK(r.code == kExitOk);

  r = run({"verify", data_file("example_ab_normal.txt"), "--json"});
  CHECK(r.code == kExitOk);
  doc = parse_report(r.out);
  CHECK(doc.reports.size() == default_checks(kAllTheorems, Mode::Corrected).size());

  r = run({"verify", data_file("nilpotent_shift.txt")});
  CHECK(r.code == kExitViolation);
}

TEST_CASE("douglas and pinv") {
  auto r = run({"douglas", data_file("example_ab_normal.txt"), data_file("example_ab_normal.txt"), "--json"});
  CHECK(r.code == kExitOk);
  const auto doc = parse_report(r.out);
  REQUIRE(doc.factorizations.size() == 1);
  CHECK(testutil::max_diff(doc.factorizations[0].factor, Matrix::identity(2)) < 1e-10);

  r = run({"douglas", data_file("diag_01.txt"), data_file("diag_10.txt")});
  CHECK(r.code == kExitViolation);
  CHECK(r.err.find("range containment fails") != std::string::npos);

  r = run({"pinv", data_file("example_ab_normal.txt")});
  CHECK(r.code == kExitOk);
  CHECK(testutil::max_diff(parse_matrix(r.out), Matrix::from_rows({{1, 0}, {-1, 1}})) < 1e-12);

  const auto out = std::filesystem::temp_directory_path() / "opineq_tests" / "pinv_out.txt";
  std::filesystem::create_directories(out.parent_path());
  r = run({"pinv", data_file("diag_10.txt"), "--out", out.string()});
  CHECK(r.code == kExitOk);
  CHECK(read_matrix_file(out) == Matrix::diagonal(std::vector<Complex>{1, 0}));
}

TEST_CASE("json round trip") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"analyze", data_file("example_ab_normal.txt"), "--json"},
           {"verify", data_file("identity2.txt"), "--mode", "both", "--json"},
           {"sweep", "--kind", "rank-deficient", "--dim", "3", "--count", "3", "--mode", "both", "--json"},
           {"douglas", data_file("diag_10.txt"), data_file("diag_10.txt"), "--json"}}) {
    const auto r = run(args);
    const auto doc = parse_report(r.out);
    CHECK(parse_report(emit_json(doc)) == doc);
    CHECK(emit_json(doc) == r.out);
  }

  ReportDocument doc;
  doc.command = "douglas";
  FactorizationResult f;
  f.kind = "douglas";
  f.factor = Matrix::from_rows({{Complex(1, -2)}});
  f.certified_infimum = std::numeric_limits<double>::infinity();
  f.residual = -std::numeric_limits<double>::infinity();
  doc.factorizations.push_back(f);
  InequalityReport rep;
  rep.lemma = LemmaId::BUZANO;
  rep.witness = Vector{Complex(0.5, 0.5)};
  rep.witness_lhs = 1.0;
  rep.witness_rhs = 0.5;
  rep.error = ErrorCode::NoConvergence;
  rep.operator_index = 3;
  doc.reports.push_back(rep);
  CHECK(parse_report(emit_json(doc)) == doc);
  CHECK_THROWS_AS(parse_report("{\"command\": 1}"), Error);
  CHECK_THROWS_AS(parse_report("not json"), Error);
}

TEST_CASE("sweep output is deterministic") {
  const std::vector<std::string> args{"sweep", "--kind", "invertible", "--dim", "3", "--count", "4",
                                      "--seed", "7", "--json"};
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  const auto doc = parse_report(a.out);
  REQUIRE(doc.ensemble.has_value());
  CHECK(doc.ensemble->seed == 7);
  CHECK(doc.summary.failed == 0);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // TEST_SUITE
