// Command-line front end.
//
//   cpa check-copositive FILE
//   cpa cp-cut FILE [--epsilon E] [--solver accp|ellipsoid] [--out CERT.json]
//   cpa bench DIR [--solver accp|ellipsoid] [--csv OUT.csv] [--json OUT.json] [--no-timing]
//   cpa generate --dim D --rank K --seed S [--out FILE]
//
// Exit codes: check-copositive 0 copositive / 1 not copositive; cp-cut 0 CP /
// 1 not CP / 3 inconclusive; 2 is always an error.

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "cpa/bench.hpp"
#include "cpa/cp_interface.hpp"
#include "cpa/matrix_io.hpp"

namespace {

constexpr int kExitError = 2;

int check_copositive(const std::string& file) {
  const cpa::SymMatrix x = cpa::io::read_matrix_file(file);
  const cpa::OracleVerdict v = cpa::test_copositive(x);
  if (v.copositive) {
    std::cout << "copositive\n";
    return 0;
  }
  std::cout << "not copositive\ny:";
  for (Eigen::Index i = 0; i < v.cut->y.size(); ++i) std::cout << ' ' << cpa::io::format_double(v.cut->y(i));
  std::cout << "\nvalue: " << cpa::io::format_double(v.cut->value) << '\n';
  return 1;
}

int cp_cut(const std::string& file, const cpa::CpOptions& options, const std::string& out) {
  const cpa::SymMatrix c = cpa::io::read_matrix_file(file);
  const cpa::Certificate cert = cpa::completely_positive_cut(c, options);
  const std::string doc = cpa::io::certificate_to_json(cert).dump(2) + "\n";
  if (out.empty()) {
    std::cout << doc;
  } else {
    cpa::io::write_file(out, doc);
    std::cout << cpa::to_string(cert.verdict) << " objective " << cpa::io::format_double(cert.objective)
              << " oracle_calls " << cert.trace.oracle_calls << '\n';
  }
  switch (cert.verdict) {
    case cpa::Verdict::CompletelyPositive:
      return 0;
    case cpa::Verdict::NotCompletelyPositive:
      return 1;
    case cpa::Verdict::Inconclusive:
      return 3;
  }
  return 3;
}

int bench(const std::string& dir, const cpa::CpOptions& options, const std::string& csv,
          const std::string& json, bool timing) {
  const cpa::bench::Report report = cpa::bench::run(dir, options, timing);
  const std::string table = cpa::bench::to_csv(report);
  if (csv.empty()) {
    std::cout << table;
  } else {
    cpa::io::write_file(csv, table);
  }
  if (!json.empty()) cpa::io::write_file(json, cpa::bench::to_json(report).dump(2) + "\n");
  if (report.growth) {
    std::cerr << "growth: oracle_calls ~ " << cpa::io::format_double(report.growth->coefficient)
              << " * d^" << cpa::io::format_double(report.growth->exponent) << '\n';
  }
  return 0;
}

int generate(long long dim, long long rank, std::uint64_t seed, const std::string& out) {
  const std::string text = cpa::io::to_dense_text(cpa::make_random_cp(dim, rank, seed));
  if (out.empty()) {
    std::cout << text << '\n';
  } else {
    cpa::io::write_file(out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complete positivity and copositivity toolkit"};
  app.require_subcommand(1);

  const std::map<std::string, cpa::SolverKind> solvers{{"accp", cpa::SolverKind::Accp},
                                                       {"ellipsoid", cpa::SolverKind::Ellipsoid}};

  std::string file;
  auto* check = app.add_subcommand("check-copositive", "Test a matrix for copositivity");
  check->add_option("file", file, "Matrix file (dense text or JSON)")->required();

  cpa::CpOptions cp_options;
  std::string out;
  auto* cut = app.add_subcommand("cp-cut", "Decide complete positivity and emit a certificate");
  cut->add_option("file", file, "Matrix file (dense text or JSON)")->required();
  cut->add_option("--epsilon", cp_options.epsilon, "Relative gap tolerance")->check(CLI::PositiveNumber);
  cut->add_option("--solver", cp_options.solver, "accp or ellipsoid")
      ->transform(CLI::CheckedTransformer(solvers, CLI::ignore_case));
  cut->add_option("--out", out, "Certificate JSON path (stdout if omitted)");

  std::string dir, csv, json;
  bool no_timing = false;
  auto* bench_cmd = app.add_subcommand("bench", "Run every instance of a directory");
  bench_cmd->add_option("dir", dir, "Instance directory")->required()->check(CLI::ExistingDirectory);
  bench_cmd->add_option("--solver", cp_options.solver, "accp or ellipsoid")
      ->transform(CLI::CheckedTransformer(solvers, CLI::ignore_case));
  bench_cmd->add_option("--epsilon", cp_options.epsilon, "Relative gap tolerance")
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--csv", csv, "CSV report path (stdout if omitted)");
  bench_cmd->add_option("--json", json, "JSON report path");
  bench_cmd->add_flag("--no-timing", no_timing, "Write 0 in the millis column");

  long long dim = 0, rank = 0;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("generate", "Write a random completely positive matrix");
  gen->add_option("--dim", dim, "Dimension d")->required()->check(CLI::PositiveNumber);
  gen->add_option("--rank", rank, "Number of nonnegative factors k")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed, "RNG seed")->required();
  gen->add_option("--out", out, "Output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*check) return check_copositive(file);
    if (*cut) return cp_cut(file, cp_options, out);
    if (*bench_cmd) return bench(dir, cp_options, csv, json, !no_timing);
    if (*gen) return generate(dim, rank, seed, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
