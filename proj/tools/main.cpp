#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "logcdr/errors.hpp"

namespace {

using logcdr::cli::Options;

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--out", o.out_path, "write the artifact to this file");
  cmd->add_flag("--json", o.json, "emit a JSON report");
}

void add_pair(CLI::App* cmd, Options& o) {
  cmd->add_option("--pair", o.pair_path, "pair description file")->required();
  cmd->add_option("--ring", o.ring_path,
                  "take the [ring] section from this file");
  cmd->add_option("--order", o.order, "q-adic truncation order")
      ->check(CLI::NonNegativeNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"elliptic genera of log pairs and the bracket engine"};
  app.require_subcommand(1);
  Options o;

  CLI::App* genus = app.add_subcommand("genus", "elliptic genus of a pair");
  add_pair(genus, o);
  add_common(genus, o);

  CLI::App* chiy =
      app.add_subcommand("chiy", "q = 0 specialization and Euler number");
  add_pair(chiy, o);
  add_common(chiy, o);

  CLI::App* theta =
      app.add_subcommand("theta", "reference series G(q,y) of the line");
  theta->add_option("--order", o.order, "q-adic truncation order")
      ->check(CLI::NonNegativeNumber);
  add_common(theta, o);

  CLI::App* elli = app.add_subcommand(
      "check-elliptic", "Jacobi shift certificate for a pair's genus");
  add_pair(elli, o);
  add_common(elli, o);

  CLI::App* verify =
      app.add_subcommand("vertex-verify", "run an identity suite");
  verify->add_option("--suite", o.suite_path, "identity suite file")
      ->required();
  add_common(verify, o);

  CLI::App* jets = app.add_subcommand(
      "jets", "log jet ideal stability and associated varieties");
  jets->add_option("--truncation", o.truncation, "jet truncation order")
      ->check(CLI::NonNegativeNumber);
  add_common(jets, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n";
    return 1;
  }

  o.command = app.get_subcommands().front()->get_name();
  try {
    logcdr::cli::Outcome r = logcdr::cli::run_command(o);
    if (o.out_path.empty()) {
      std::cout << r.text;
    } else {
      try {
        logcdr::cli::write_artifact(o.out_path, r.text);
      } catch (const logcdr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
    }
    return r.exit_code;
  } catch (const logcdr::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const logcdr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
