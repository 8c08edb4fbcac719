// opalg: finite-dimensional operator algebras, sectors, quantum
// instruments, modular structure and symmetry breaking, as exact numerical
// linear algebra on matrix algebras.
//
// Exit codes: 0 success, 1 invariant failure, 2 input error, 3 internal
// numerical failure.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "opalg/io.hpp"

namespace {

struct Options {
  opalg::io::CommandFlags flags;
  std::vector<std::string> files;
};

int dispatch(const std::string& command, const Options& opts) {
  using namespace opalg::io;
  Report report;
  if (command == "verify") {
    report = run_verify(opts.files, opts.flags);
  } else {
    std::vector<ProblemSpec> specs;
    for (const std::string& path : opts.files) specs.push_back(load_spec(path));
    report = run_command(command, specs, opts.flags);
  }
  std::cout << render_report(report, opts.flags.format);
  return report.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "operator-algebra toolkit: sector analysis, GNS, measurement couplings,\n"
      "modular structure and symmetry breaking on finite-dimensional algebras"};
  app.require_subcommand(1);

  Options opts;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"sectors", "sector table and q->c distribution (ALGEBRA [STATE])"},
      {"gns", "GNS construction summary (ALGEBRA STATE)"},
      {"measure", "instrument probabilities and post states (MEASUREMENT)"},
      {"modular", "modular spectrum and Tomita residuals (MODULAR)"},
      {"symmetry", "breaking analysis and fixed points (SYMMETRY)"},
      {"crossed", "crossed product structure (SYMMETRY | ALGEBRA ACTION)"},
      {"verify", "run invariant suites (MANIFEST | SPECS...)"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--tol", opts.flags.tol, "numerical tolerance (default 1e-9)");
    sub->add_option("--samples", opts.flags.samples, "Monte-Carlo sample count for 'measure'");
    sub->add_option("--seed", opts.flags.seed, "sampling seed (default 0)");
    sub->add_option("--format", opts.flags.format, "output format: human | machine")
        ->check(CLI::IsMember({"human", "machine"}));
    sub->add_option("files", opts.files, "input spec files")->required();
  }

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return dispatch(command, opts);
  } catch (const opalg::SchemaError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const opalg::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const opalg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
