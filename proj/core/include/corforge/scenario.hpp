#pragma once

#include <string>

#include "corforge/models.hpp"

namespace corforge {

/// A scenario ready to run plus its artifact destinations and an echo of the
/// configuration for the run report.
struct ScenarioFile {
  ModelScenario scenario;
  std::string csv_path;     // empty -> derived from scenario name + command
  std::string report_path;  // likewise
  std::string echo;         // JSON text of the configuration
};

/// Parses and fully validates a scenario JSON file. Every coefficient
/// expression is parsed and differentiated here; malformed input throws
/// ParseError (with position/token) and structurally valid but inconsistent
/// input throws ValidationError naming the offending field.
ScenarioFile parse_scenario(const std::string& path);

/// Same, but from in-memory JSON text (used by tests and stdin-style runs).
ScenarioFile parse_scenario_text(const std::string& text,
                                 const std::string& origin = "<memory>");

/// Built-in scenarios: "two-level", "fring-tenney", "jones-mateo".
ScenarioFile builtin_scenario(const std::string& name);

/// Path or builtin name, whichever matches; builtin names win.
ScenarioFile load_scenario(const std::string& path_or_name);

}  // namespace corforge
