#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corforge/scenario.hpp"

namespace corforge {

struct RunOptions {
  std::optional<int> picture;         // overrides the scenario picture
  int jobs = 1;                        // fan-out across pictures/sweep points
  std::optional<std::string> out_dir;  // redirects artifacts
  bool symbolic = false;               // coriolis: also run the exact symbolic route
};

/// One verified invariant: measured residual against its pinned tolerance.
/// `applicable` is false when the check does not bind for this scenario
/// (e.g. quasi-Hermiticity with a bottom-up, non-Hermitian-by-construction
/// Hamiltonian); inapplicable entries never fail a run.
struct InvariantCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool applicable = true;
};

struct RunReport {
  std::string command;
  std::string scenario_echo;  // JSON text of the configuration
  std::vector<InvariantCheck> invariants;
  std::vector<std::pair<std::string, double>> timings_ms;
  std::vector<std::string> artifacts;  // files written
  std::vector<std::string> messages;   // human-readable lines (symbolic output)
  int exit_status = 0;                 // 0 ok, 3 verification failure

  /// Timings can be excluded so byte-level comparisons of repeated runs see
  /// only deterministic content.
  std::string to_json(bool include_timings = true) const;
};

/// Executes one CLI command (simulate | heisenberg | density | metric |
/// verify | spectrum | coriolis | sweep), writes the CSV/report artifacts
/// and returns the report. Numerical failures propagate as exceptions; a
/// residual above tolerance is not an exception but exit_status 3.
RunReport run_command(const std::string& command, const ScenarioFile& file,
                      const RunOptions& options);

/// CSV serialization: header then one row per time with t, re/im pairs of
/// each tracked scalar, then the diagnostic columns; 17 significant digits,
/// LF line endings.
std::string csv_string(const EvolutionResult& result);
void emit_csv(const EvolutionResult& result, const std::string& path);

}  // namespace corforge
