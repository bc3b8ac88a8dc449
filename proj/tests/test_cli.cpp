// End-to-end tests of the command-line tool: subcommand behavior, exit
// codes, document round-trips, and CSV export.  The binary path comes in
// through the MASLOV_CLI_PATH compile definition.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <maslov/io.hpp>

namespace {

namespace fs = std::filesystem;
using maslov::Int;
using maslov::IntMat;
using maslov::IntVec;
using maslov::io::json;

struct RunResult {
  int status = -1;
  std::string out;
};

fs::path temp_file(const std::string& tag) {
  static int counter = 0;
  return fs::temp_directory_path() /
         ("maslov_cli_" + tag + "_" + std::to_string(::getpid()) + "_" +
          std::to_string(counter++));
}

RunResult run_cli(const std::string& args, const std::string& input = "") {
  std::string cmd = std::string("\"") + MASLOV_CLI_PATH + "\" " + args;
  fs::path in_path;
  if (!input.empty()) {
    in_path = temp_file("in");
    std::ofstream f(in_path);
    f << input;
    f.close();
    cmd += " < " + in_path.string();
  }
  cmd += " 2>/dev/null";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int ws = ::pclose(pipe);
  r.status = WIFEXITED(ws) ? WEXITSTATUS(ws) : -1;
  if (!in_path.empty()) fs::remove(in_path);
  return r;
}

json parse_out(const RunResult& r) {
  json doc = json::parse(r.out, nullptr, false);
  REQUIRE_FALSE(doc.is_discarded());
  return doc;
}

}  // namespace

TEST_CASE("cli classify: triangular shear with the parameter reported") {
  RunResult r = run_cli("classify", "2\n1 5\n0 1\n");
  REQUIRE(r.status == 0);
  json doc = parse_out(r);
  REQUIRE(doc["form"] == "Triangular2");
  REQUIRE(doc["k"] == 5);
  // emitted documents re-parse to the identical matrix
  IntMat nf = maslov::io::matrix_from_json(doc["normal_form"]);
  REQUIRE(nf == IntMat::from_rows({{1, 5}, {0, 1}}));
  IntMat t = maslov::io::matrix_from_json(doc["conjugator"]);
  REQUIRE(maslov::det_exact(t) == 1);
}

TEST_CASE("cli classify: cat-map block document in structured form") {
  RunResult r =
      run_cli("classify", "{\"n\":3,\"entries\":[[1,0,0],[0,2,1],[0,1,1]]}");
  REQUIRE(r.status == 0);
  json doc = parse_out(r);
  REQUIRE(doc["form"] == "IrrationalBlock3");
  REQUIRE(doc["block_diagonalization"]["solvable"] == true);
}

TEST_CASE("cli classify: rank-one unipotent part reported with its content") {
  RunResult r = run_cli("classify", "3\n1 0 3\n0 1 0\n0 0 1\n");
  REQUIRE(r.status == 0);
  json doc = parse_out(r);
  REQUIRE(doc["form"] == "UpperUnipotent3");
  REQUIRE(doc["unipotent_reduction"]["g"] == 3);
  IntMat t = maslov::io::matrix_from_json(doc["unipotent_reduction"]["conjugator"]);
  REQUIRE(maslov::det_exact(t) == 1);
}

TEST_CASE("cli classify: no unit eigenvalue exits with the verdict status") {
  RunResult r = run_cli("classify", "2\n2 1\n1 1\n");
  REQUIRE(r.status == 2);
  json doc = parse_out(r);
  REQUIRE(doc["form"] == "NoUnitEigenvalue");
}

TEST_CASE("cli classify: malformed documents exit with the parse status") {
  REQUIRE(run_cli("classify", "2\n1 5\n0\n").status == 1);
  REQUIRE(run_cli("classify", "not a matrix").status == 1);
  REQUIRE(run_cli("classify", "{\"n\":2}").status == 1);
  REQUIRE(run_cli("classify", "2\n1 0\n0 2\n").status == 1);  // det != 1
}

TEST_CASE("cli complete: primitive vector becomes a determinant-one column") {
  RunResult r = run_cli("complete --vector 2,3");
  REQUIRE(r.status == 0);
  IntMat s = maslov::io::matrix_from_json(parse_out(r));
  REQUIRE(maslov::det_exact(s) == 1);
  REQUIRE(s.col(0) == IntVec{2, 3});

  RunResult t = run_cli("complete --vector 2,3 --text");
  REQUIRE(t.status == 0);
  std::istringstream in(t.out);
  REQUIRE(maslov::io::read_matrix_text(in) == s);
}

TEST_CASE("cli complete: shared factors are rejected") {
  REQUIRE(run_cli("complete --vector 2,4").status == 1);
  REQUIRE(run_cli("complete --vector 0,0,5").status == 1);
}

TEST_CASE("cli blockdiag: solvable and obstructed rows") {
  RunResult ok = run_cli("blockdiag --row 3,-7", "2\n2 1\n1 1\n");
  REQUIRE(ok.status == 0);
  json doc = parse_out(ok);
  REQUIRE(doc["solvable"] == true);
  IntVec d{Int(doc["d"][0].get<long>()), Int(doc["d"][1].get<long>())};
  // substitute back: d * (A - identity) must reproduce the row
  IntMat b = IntMat::from_rows({{1, 1}, {1, 0}});
  REQUIRE(b.mul_row(d) == (IntVec{3, -7}));

  RunResult bad = run_cli("blockdiag --row 0,1", "2\n0 1\n-1 0\n");
  REQUIRE(bad.status == 2);
  json doc2 = parse_out(bad);
  REQUIRE(doc2["solvable"] == false);
  REQUIRE(doc2["obstruction"]["divisor"] == 2);
}

TEST_CASE("cli simulate: default system loop reports the expected report keys") {
  fs::path csv = temp_file("csv");
  RunResult r = run_cli("simulate --samples 16 --tol 1e-9 --csv " +
                        csv.string());
  REQUIRE(r.status == 0);
  json doc = parse_out(r);
  for (const char* key :
       {"loop", "monodromy", "maslov", "winding_k", "action_residual",
        "theorem", "classification"})
    REQUIRE(doc.contains(key));
  REQUIRE(doc["theorem"] == "holds");
  REQUIRE(doc["maslov"] == json({0, 2}));
  REQUIRE(std::abs(doc["winding_k"].get<int>()) == 1);
  IntMat m = maslov::io::matrix_from_json(doc["monodromy"]);
  REQUIRE(maslov::det_exact(m) == 1);
  REQUIRE(m.mul_col(IntVec{0, 2}) == (IntVec{0, 2}));

  // CSV: header plus samples + 1 rows, closing sample included
  std::ifstream f(csv);
  REQUIRE(f.good());
  std::string line;
  std::getline(f, line);
  REQUIRE(line == "s,j,h,theta_unwrapped,I1,I2,w1,w2");
  int rows = 0;
  while (std::getline(f, line))
    if (!line.empty()) ++rows;
  REQUIRE(rows == 17);
  fs::remove(csv);
}

TEST_CASE("cli simulate: loop far from the critical value is trivial") {
  RunResult r = run_cli(
      "simulate --loop-center 0.5,0.5 --loop-radii 0.05,0.05 --samples 16 "
      "--tol 1e-9");
  REQUIRE(r.status == 0);
  json doc = parse_out(r);
  REQUIRE(doc["winding_k"] == 0);
  REQUIRE(maslov::io::matrix_from_json(doc["monodromy"]) ==
          IntMat::identity(2));
}

TEST_CASE("cli simulate: status codes for bad flags and critical loops") {
  REQUIRE(run_cli("simulate --samples 8").status == 1);
  REQUIRE(run_cli("simulate --orientation sideways").status == 1);
  REQUIRE(run_cli("simulate --loop-radii 0.1").status == 1);
  REQUIRE(run_cli("simulate --loop-center 0,-0.25 --loop-radii 0.05,0.05 "
                  "--samples 16").status == 3);
}

TEST_CASE("cli theorem-check: verdicts map to exit statuses") {
  std::string m = "2\n1 0\n-1 1\n";
  RunResult holds = run_cli("theorem-check --mu 0,2", m);
  REQUIRE(holds.status == 0);
  REQUIRE(parse_out(holds)["theorem"] == "holds");

  RunResult fails = run_cli("theorem-check --mu 1,0", m);
  REQUIRE(fails.status == 2);
  json doc = parse_out(fails);
  REQUIRE(doc["theorem"] == "fails");
  REQUIRE(doc["image"] == json({1, -1}));

  RunResult vac = run_cli("theorem-check --mu 0,0", m);
  REQUIRE(vac.status == 0);
  REQUIRE(parse_out(vac)["theorem"] == "vacuous");
}

TEST_CASE("cli: missing subcommand or unknown flags are usage errors") {
  REQUIRE(run_cli("").status == 1);
  REQUIRE(run_cli("frobnicate").status == 1);
  REQUIRE(run_cli("complete").status == 1);  // --vector is required
}

TEST_CASE("matrix documents: text and structured forms round-trip") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> entry(-1000000, 1000000);
  for (int it = 0; it < 50; ++it) {
    std::size_t n = 1 + static_cast<std::size_t>(it % 4);
    IntMat m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = entry(rng);
    std::ostringstream text;
    maslov::io::write_matrix_text(text, m);
    std::istringstream back(text.str());
    REQUIRE(maslov::io::read_matrix_text(back) == m);
    REQUIRE(maslov::io::matrix_from_json(maslov::io::matrix_to_json(m)) == m);
  }
}

TEST_CASE("matrix documents: entries beyond double precision use strings") {
  Int big = Int("123456789012345678901234567890");
  IntMat m(2, 2);
  m(0, 0) = big;
  m(0, 1) = 1;
  m(1, 0) = -big;
  m(1, 1) = 3;
  json doc = maslov::io::matrix_to_json(m);
  REQUIRE(doc["entries"][0][0].is_string());
  REQUIRE(doc["entries"][0][1].is_number_integer());
  REQUIRE(maslov::io::matrix_from_json(doc) == m);

  std::ostringstream text;
  maslov::io::write_matrix_text(text, m);
  std::istringstream back(text.str());
  REQUIRE(maslov::io::read_matrix_text(back) == m);
}

TEST_CASE("integer lists: parse errors carry the offending text") {
  REQUIRE_THROWS_AS(maslov::io::parse_int_list("1,two"), maslov::ParseError);
  REQUIRE_THROWS_AS(maslov::io::parse_int_list(""), maslov::ParseError);
  REQUIRE_THROWS_AS(maslov::io::parse_int_list("1,2,3", 2), maslov::ParseError);
  REQUIRE(maslov::io::parse_int_list("-4, 5", 2) == (IntVec{-4, 5}));
}
