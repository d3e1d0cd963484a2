#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "prexp/cli.hpp"

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw prexp::Error(prexp::Errc::ConfigInvalid, "cannot open '" + path + "'");
  return in;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic regulator and L-function experiments"};
  app.require_subcommand(1);

  prexp::CheckConfig cfg;
  std::string suite;
  std::string emit = "text";
  auto* check = app.add_subcommand("check", "run a verification suite");
  check->add_option("--suite", suite, "operators|prexp|eigenspace|mu-factors|lfunction|all")->required();
  check->add_option("--prime", cfg.p, "prime p")->required();
  check->add_option("--prec", cfg.Np, "p-adic relative precision")->required();
  check->add_option("--pi-deg", cfg.NPi, "pi-adic truncation degree")->required();
  check->add_option("--t-deg", cfg.NT, "T-adic truncation degree")->capture_default_str();
  check->add_option("--y-deg", cfg.NY, "weight-variable truncation degree")->capture_default_str();
  check->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  check->add_option("--emit", emit, "output style")->check(CLI::IsMember({"text", "machine"}))->capture_default_str();

  std::string exp_input;
  auto* exp = app.add_subcommand("exp", "rank-one Perrin-Riou exponential");
  exp->add_option("--input", exp_input, "exp input file")->required();

  std::string lfun_input, grid;
  auto* lfun = app.add_subcommand("lfun", "two-variable L-function values");
  lfun->add_option("--input", lfun_input, "L-run input file")->required();
  lfun->add_option("--grid", grid, "grid, e.g. w=2,6;chi=0,1,3:2")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      const auto report = prexp::cli::run_suite(suite, cfg);
      std::cout << prexp::cli::format_report(report, emit == "machine");
      return report.failures() == 0 ? 0 : 1;
    }
    if (exp->parsed()) {
      auto in = open_input(exp_input);
      std::cout << prexp::cli::run_exp(in);
      return 0;
    }
    auto in = open_input(lfun_input);
    std::cout << prexp::cli::run_lfun(in, grid);
    return 0;
  } catch (const prexp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
