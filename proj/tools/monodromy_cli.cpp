// Command-line front end: classify integer monodromy matrices, complete
// primitive vectors to unimodular matrices, test block diagonalizability,
// run loop continuation on the champagne-bottle system, and check the
// eigenvector property M * mu = mu.
//
// Exit codes: 0 success (including a vacuous eigenvector check),
//             1 malformed input or violated preconditions,
//             2 negative verdict (no unit eigenvalue, unsolvable block
//               diagonalization, failed eigenvector check),
//             3 loop leaves the regular region (prints the failing s).

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <maslov/io.hpp>

namespace {

using maslov::Int;
using maslov::IntMat;
using maslov::IntVec;
using maslov::io::json;

constexpr int kOk = 0;
constexpr int kBadInput = 1;
constexpr int kNegative = 2;
constexpr int kNearCritical = 3;

IntMat load_matrix(const std::string& path) {
  if (path.empty() || path == "-")
    return maslov::io::read_matrix_auto(std::cin);
  std::ifstream in(path);
  if (!in) throw maslov::ParseError("cannot open input file: " + path);
  return maslov::io::read_matrix_auto(in);
}

void emit(const json& doc) { std::cout << doc.dump(2) << "\n"; }

json blockdiag_to_json(const maslov::BlockDiagResult& r) {
  json out;
  out["solvable"] = static_cast<bool>(r.d);
  if (r.d) {
    out["d"] = maslov::io::vector_to_json(*r.d);
  } else {
    out["obstruction"] =
        json{{"index", r.obstruction_index},
             {"divisor", maslov::io::int_to_json(r.obstruction_divisor)},
             {"target", maslov::io::int_to_json(r.obstruction_target)}};
  }
  return out;
}

int run_classify(const std::string& input) {
  IntMat m = load_matrix(input);
  maslov::ClassificationResult c = maslov::classify(m);
  json doc = maslov::io::classification_to_json(c);
  if (c.form == maslov::FormTag::Triangular2)
    doc["k"] = maslov::io::int_to_json(c.normal_form(0, 1));
  if (m.rows() == 3 && c.form != maslov::FormTag::NoUnitEigenvalue) {
    if (c.signature.ma_plus == 3 && c.signature.mg_plus == 2) {
      maslov::Mg2Reduction red = maslov::reduce_mg2(m);
      doc["unipotent_reduction"] =
          json{{"g", maslov::io::int_to_json(red.g)},
               {"conjugator", maslov::io::matrix_to_json(red.t)}};
    }
    IntVec a{c.normal_form(0, 1), c.normal_form(0, 2)};
    IntMat blk(2, 2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) blk(i, j) = c.normal_form(i + 1, j + 1);
    doc["block_diagonalization"] =
        blockdiag_to_json(maslov::block_diagonalize(a, blk));
  }
  emit(doc);
  return c.form == maslov::FormTag::NoUnitEigenvalue ? kNegative : kOk;
}

int run_complete(const std::string& vec_text, bool as_text) {
  IntVec u = maslov::io::parse_int_list(vec_text);
  IntMat s = maslov::unimodular_completion(maslov::PrimitiveVector(u));
  if (as_text)
    maslov::io::write_matrix_text(std::cout, s);
  else
    emit(maslov::io::matrix_to_json(s));
  return kOk;
}

int run_blockdiag(const std::string& row_text, const std::string& input) {
  IntVec a = maslov::io::parse_int_list(row_text, 2);
  IntMat blk = load_matrix(input);
  maslov::BlockDiagResult r = maslov::block_diagonalize(a, blk);
  json doc = blockdiag_to_json(r);
  if (r.conjugate) doc["conjugate"] = maslov::io::matrix_to_json(*r.conjugate);
  emit(doc);
  return r.d ? kOk : kNegative;
}

struct SimulateFlags {
  std::string system = "1,-1";
  std::string center = "0,0";
  std::string radii = "0.1,0.1";
  std::size_t samples = 64;
  std::string orientation = "ccw";
  double tol = 1e-10;
  std::string csv_path;
};

std::pair<double, double> parse_double_pair(const std::string& text,
                                            const char* what) {
  double a = 0, b = 0;
  char extra = 0;
  if (std::sscanf(text.c_str(), " %lf , %lf %c", &a, &b, &extra) != 2)
    throw maslov::ParseError(std::string(what) +
                             ": expected two comma-separated numbers, got '" +
                             text + "'");
  return {a, b};
}

int run_simulate(const SimulateFlags& f) {
  auto [a, b] = parse_double_pair(f.system, "--system");
  auto [j0, h0] = parse_double_pair(f.center, "--loop-center");
  auto [rj, rh] = parse_double_pair(f.radii, "--loop-radii");
  if (f.orientation != "ccw" && f.orientation != "cw")
    throw maslov::ParseError("--orientation: expected 'ccw' or 'cw'");
  if (!(f.tol > 0) || !(rj > 0) || !(rh > 0))
    throw maslov::ParseError("tolerance and radii must be positive");

  maslov::SystemSpec sys{a, b};
  maslov::LoopSpec loop;
  loop.j0 = j0;
  loop.h0 = h0;
  loop.rj = rj;
  loop.rh = rh;
  loop.samples = f.samples;
  loop.clockwise = (f.orientation == "cw");
  maslov::TraceOptions opts;
  opts.tol = f.tol;

  maslov::MonodromyReport rep = maslov::continue_loop(sys, loop, opts);
  if (!f.csv_path.empty()) {
    std::ofstream csv(f.csv_path);
    if (!csv)
      throw maslov::ParseError("cannot open CSV output file: " + f.csv_path);
    maslov::io::write_csv(csv, rep);
  }
  emit(maslov::io::report_to_json(rep, loop, sys));
  return rep.verdict == maslov::Verdict::Fails ? kNegative : kOk;
}

int run_theorem_check(const std::string& mu_text, const std::string& input) {
  IntMat m = load_matrix(input);
  IntVec mu = maslov::io::parse_int_list(mu_text, m.rows());
  maslov::Verdict v = maslov::check_maslov_invariance(m, mu);
  json doc;
  doc["mu"] = maslov::io::vector_to_json(mu);
  doc["matrix"] = maslov::io::matrix_to_json(m);
  doc["theorem"] = maslov::verdict_name(v);
  if (v != maslov::Verdict::Vacuous)
    doc["image"] = maslov::io::vector_to_json(m.mul_col(mu));
  emit(doc);
  return v == maslov::Verdict::Fails ? kNegative : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Integer monodromy toolkit: normal forms of unimodular matrices and "
      "loop continuation of cycle data on the champagne-bottle system"};
  app.require_subcommand(1);

  std::string classify_input;
  CLI::App* classify = app.add_subcommand(
      "classify", "Classify a unimodular matrix with eigenvalue 1 into its "
                  "integer normal form");
  classify->add_option("-i,--input", classify_input,
                       "matrix document file ('-' or omitted: stdin)");

  std::string complete_vec;
  bool complete_text = false;
  CLI::App* complete = app.add_subcommand(
      "complete", "Complete a primitive integer vector to a determinant-one "
                  "matrix with that first column");
  complete->add_option("-v,--vector", complete_vec,
                       "comma-separated integer entries")
      ->required();
  complete->add_flag("--text", complete_text,
                     "write the plain text matrix format instead of JSON");

  std::string bd_row, bd_input;
  CLI::App* blockdiag = app.add_subcommand(
      "blockdiag", "Decide solvability of d*(A - I) = a over the integers "
                   "for a 2x2 unimodular block A");
  blockdiag->add_option("-r,--row", bd_row, "the row a as 'a1,a2'")->required();
  blockdiag->add_option("-i,--input", bd_input,
                        "2x2 matrix document file ('-' or omitted: stdin)");

  SimulateFlags sf;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Continue cycle data around a loop of regular values and "
                  "report the integer monodromy");
  simulate->add_option("--system", sf.system, "potential coefficients 'a,b'")
      ->capture_default_str();
  simulate->add_option("--loop-center", sf.center, "loop center 'j,h'")
      ->capture_default_str();
  simulate->add_option("--loop-radii", sf.radii, "loop radii 'rj,rh'")
      ->capture_default_str();
  simulate->add_option("--samples", sf.samples, "number of loop samples N")
      ->capture_default_str();
  simulate->add_option("--orientation", sf.orientation, "'ccw' or 'cw'")
      ->capture_default_str();
  simulate->add_option("--tol", sf.tol, "integrator tolerance")
      ->capture_default_str();
  simulate->add_option("--csv", sf.csv_path,
                       "also write per-sample rows to this CSV file");

  std::string tc_mu, tc_input;
  CLI::App* theorem = app.add_subcommand(
      "theorem-check", "Check that mu is fixed by the matrix (M * mu = mu), "
                       "vacuous when mu = 0");
  theorem->add_option("-m,--mu", tc_mu, "comma-separated vector")->required();
  theorem->add_option("-i,--input", tc_input,
                      "matrix document file ('-' or omitted: stdin)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    // CLI11 returns 0 for --help; anything else is a usage error
    return rc == 0 ? kOk : kBadInput;
  }

  try {
    if (classify->parsed()) return run_classify(classify_input);
    if (complete->parsed()) return run_complete(complete_vec, complete_text);
    if (blockdiag->parsed()) return run_blockdiag(bd_row, bd_input);
    if (simulate->parsed()) return run_simulate(sf);
    if (theorem->parsed()) return run_theorem_check(tc_mu, tc_input);
  } catch (const maslov::NearCriticalError& e) {
    std::cerr << "error: " << e.what() << " (s = " << e.s << ")\n";
    return kNearCritical;
  } catch (const maslov::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}
