// Command-line front end: scenario ingestion, dispatch, artifact emission.
//
// Exit codes: 0 success, 1 usage/parse problem, 2 numerical failure,
// 3 a verification residual exceeded its tolerance.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <iostream>

#include "corforge/errors.hpp"
#include "corforge/log.hpp"
#include "corforge/runner.hpp"

namespace {

struct CommonArgs {
  std::string scenario;
  corforge::RunOptions options;
};

void print_report(const corforge::RunReport& report) {
  for (const std::string& line : report.messages) std::cout << line << "\n";
  for (const corforge::InvariantCheck& c : report.invariants) {
    if (!c.applicable) {
      std::printf("[ -- ] %-32s residual=%.3e (informational)\n", c.name.c_str(),
                  c.residual);
      continue;
    }
    std::printf("[%s] %-32s residual=%.3e tolerance=%.3e\n",
                c.pass ? "PASS" : "FAIL", c.name.c_str(), c.residual, c.tolerance);
  }
  for (const std::string& path : report.artifacts)
    corforge::log(corforge::LogLevel::info, "wrote " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corforge: composite Coriolis operators, hybrid picture ladders "
               "and non-Hermitian evolution at desk scale"};
  app.require_subcommand(1);

  static const std::vector<std::string> commands = {
      "simulate", "heisenberg", "density", "metric",
      "verify",   "spectrum",   "coriolis", "sweep"};

  std::map<std::string, CommonArgs> args;
  for (const std::string& name : commands) {
    CLI::App* sub = app.add_subcommand(name);
    CommonArgs& a = args[name];
    sub->add_option("scenario", a.scenario,
                    "Scenario JSON path or builtin name "
                    "(two-level | fring-tenney | jones-mateo)")
        ->required();
    sub->add_option("--picture", a.options.picture, "Override the picture index j");
    sub->add_option("--jobs", a.options.jobs,
                    "Parallelism across pictures/sweep points (within one "
                    "integration execution stays sequential)");
    sub->add_option("--out", a.options.out_dir, "Directory for CSV/report artifacts");
    if (name == "coriolis")
      sub->add_flag("--symbolic", a.options.symbolic,
                    "Also run the exact symbolic recursion and print it");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const CommonArgs& a = args[command];

  try {
    corforge::log(corforge::LogLevel::debug, "loading scenario " + a.scenario);
    const corforge::ScenarioFile file = corforge::load_scenario(a.scenario);
    const corforge::RunReport report =
        corforge::run_command(command, file, a.options);
    print_report(report);
    return report.exit_status;
  } catch (const corforge::ParseError& e) {
    corforge::log(corforge::LogLevel::error, e.what());
    return 1;
  } catch (const corforge::ValidationError& e) {
    corforge::log(corforge::LogLevel::error, e.what());
    return 1;
  } catch (const corforge::IoError& e) {
    corforge::log(corforge::LogLevel::error, e.what());
    return 2;
  } catch (const corforge::Error& e) {
    // SingularFactor, StepRejection, EigensolverFailure, Overflow, ZeroNorm,
    // DomainError, NonTerminatingSeries: numerical failures.
    corforge::log(corforge::LogLevel::error, e.what());
    return 2;
  } catch (const std::exception& e) {
    corforge::log(corforge::LogLevel::error, std::string("unexpected: ") + e.what());
    return 2;
  }
}
