#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using bcv::cli::Entries;
using bcv::cli::Options;

int emit(const std::string& command, const Entries& entries, const Options& o) {
  std::ofstream file;
  if (!o.out.empty()) {
    file.open(o.out);
    if (!file) {
      std::cerr << "bcv: cannot open " << o.out << " for writing\n";
      return 2;
    }
  }
  std::ostream& os = o.out.empty() ? std::cout : file;
  if (o.format == "json") {
    bcv::cli::write_json(os, command, entries);
  } else if (o.format == "csv") {
    bcv::cli::write_csv(os, entries);
  } else {
    bcv::cli::write_text(os, entries);
  }
  bool all_pass = true;
  for (const auto& e : entries) {
    if (!e.pass) {
      if (all_pass) std::cerr << "failing claims:";
      std::cerr << ' ' << e.claim_id;
      all_pass = false;
    }
  }
  if (!all_pass) std::cerr << '\n';
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for the strong converse constant of Bernstein polynomials"};
  app.require_subcommand(1);
  Options o;

  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", o.out, "Write the report to FILE instead of stdout");
  app.add_option("--tol", o.tol, "Override the tolerance of reference comparisons")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Master seed for Monte Carlo checks");

  auto* constants = app.add_subcommand("constants", "sup C, sup C-tilde, the smooth-class constant and K(7.2)");
  constants->add_option("--grid", o.grid, "Scan points on (0, lambda-max]")->check(CLI::Range(10L, 100000000L));
  constants->add_option("--lambda-max", o.lambda_max, "Upper end of the lambda scan")->check(CLI::Range(2.0, 1000.0));

  auto* upper = app.add_subcommand("upper", "Upper bound expressions at (a, m)");
  upper->add_option("--a", o.a, "Region threshold a")->check(CLI::PositiveNumber);
  upper->add_option("--m", o.m, "Iterate depth m")->check(CLI::Range(1, 500));

  auto* lower = app.add_subcommand("lower", "Lower bound witness f_n");
  lower->add_option("--n", o.n, "Degree n (default 10000)")->check(CLI::Range(8, 1000000));

  auto* hn = app.add_subcommand("hn", "sup_x H_n(x) and the H_n bound");
  hn->add_option("--n", o.n, "Degree n (default 2000)")->check(CLI::Range(3, 100000));

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  verify->add_option("--suite", o.suite, "Suite name")
      ->check(CLI::IsMember({"all", "dist", "bernstein", "moduli", "central", "noncentral", "bounds"}));

  auto* sweep = app.add_subcommand("sweep", "CSV table of both expressions over a range of a");
  sweep->add_option("--a-range", o.a_range, "LO HI");
  sweep->add_option("--step", o.step, "Step in a")->check(CLI::PositiveNumber);
  sweep->add_option("--m", o.m, "Iterate depth m")->check(CLI::Range(1, 500));

  for (auto* sub : {constants, upper, lower, hn, verify, sweep}) sub->fallthrough();

  try {
    app.parse(argc, argv);
    if (sweep->parsed() && !(o.a_range.first > 0.0 && o.a_range.first <= o.a_range.second)) {
      throw CLI::ValidationError("--a-range", "need 0 < LO <= HI");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (constants->parsed()) return emit("constants", bcv::cli::cmd_constants(o), o);
    if (upper->parsed()) return emit("upper", bcv::cli::cmd_upper(o), o);
    if (lower->parsed()) return emit("lower", bcv::cli::cmd_lower(o), o);
    if (hn->parsed()) return emit("hn", bcv::cli::cmd_hn(o), o);
    if (verify->parsed()) return emit("verify", bcv::cli::cmd_verify(o), o);
    if (sweep->parsed()) {
      const auto t = bcv::cli::cmd_sweep(o);
      if (o.out.empty()) {
        std::cout << t.csv;
      } else {
        std::ofstream file(o.out);
        if (!file) {
          std::cerr << "bcv: cannot open " << o.out << " for writing\n";
          return 2;
        }
        file << t.csv;
      }
      std::cerr << "minimum of max(expr) at a=" << bcv::cli::fmt(t.result.best_a) << ": "
                << bcv::cli::fmt(t.result.best_max) << '\n';
      return t.result.best_max < bcv::tolerances::upper_bound ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "bcv: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
