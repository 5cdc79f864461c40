#include "corforge/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "corforge/errors.hpp"

namespace corforge {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw ValidationError("scenario field '" + field + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) invalid(where.empty() ? key : where + "." + key, "missing");
  return *it;
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) invalid(field, "expected a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) invalid(field, "expected an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) invalid(field, "expected a string");
  return v.get<std::string>();
}

Complex parse_complex(const json& v, const std::string& field) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    invalid(field, "complex numbers are [re, im] pairs");
  return {v[0].get<double>(), v[1].get<double>()};
}

Vector parse_vector(const json& v, int dimension, const std::string& field) {
  if (!v.is_array()) invalid(field, "expected an array of [re, im] pairs");
  if (static_cast<int>(v.size()) != dimension)
    invalid(field, "expected " + std::to_string(dimension) + " entries, got " +
                       std::to_string(v.size()));
  Vector out(dimension);
  for (int k = 0; k < dimension; ++k)
    out(k) = parse_complex(v[static_cast<std::size_t>(k)],
                           field + "[" + std::to_string(k) + "]");
  return out;
}

Matrix parse_literal_matrix(const json& v, int dimension, const std::string& field) {
  if (!v.is_array()) invalid(field, "expected a matrix (array of rows)");
  if (static_cast<int>(v.size()) != dimension)
    invalid(field, "matrix must be " + std::to_string(dimension) + "x" +
                       std::to_string(dimension));
  Matrix out(dimension, dimension);
  for (int r = 0; r < dimension; ++r) {
    const json& row = v[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != dimension)
      invalid(field + "[" + std::to_string(r) + "]", "row length mismatch");
    for (int c = 0; c < dimension; ++c)
      out(r, c) = parse_complex(row[static_cast<std::size_t>(c)],
                                field + "[" + std::to_string(r) + "][" +
                                    std::to_string(c) + "]");
  }
  return out;
}

// Builtin operator names usable anywhere a matrix is expected.
Matrix builtin_matrix(const std::string& name, int dimension, const std::string& field) {
  if (name == "identity") return Matrix::Identity(dimension, dimension);
  if (name == "pauli_x" || name == "pauli_y" || name == "pauli_z") {
    if (dimension != 2) invalid(field, "'" + name + "' needs dimension 2");
    Matrix m(2, 2);
    if (name == "pauli_x") m << 0, 1, 1, 0;
    if (name == "pauli_y") m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    if (name == "pauli_z") m << 1, 0, 0, -1;
    return m;
  }
  const OscOperators osc = build_osc_operators(dimension);
  if (name == "x") return osc.x;
  if (name == "p") return osc.p;
  if (name == "p2") return osc.p * osc.p;
  if (name == "p3") return osc.p * osc.p * osc.p;
  invalid(field, "unknown builtin operator '" + name + "'");
}

Matrix parse_matrix_spec(const json& v, int dimension, const std::string& field) {
  if (v.is_string()) return builtin_matrix(v.get<std::string>(), dimension, field);
  return parse_literal_matrix(v, dimension, field);
}

CoefficientFn parse_coefficient(const json& v, const std::string& field) {
  const std::string src = as_string(v, field);
  try {
    return CoefficientFn(src);
  } catch (const ParseError& e) {
    throw ParseError("scenario field '" + field + "': " + e.what());
  }
}

std::optional<WeylMonomial> builtin_weyl_monomial(const std::string& name) {
  if (name == "x") return WeylMonomial{1, 0};
  if (name == "p") return WeylMonomial{0, 1};
  if (name == "p2") return WeylMonomial{0, 2};
  if (name == "p3") return WeylMonomial{0, 3};
  return std::nullopt;
}

ScenarioFile from_json(const json& root) {
  ScenarioFile file;
  ModelScenario& sc = file.scenario;

  const int schema = as_int(require(root, "schema_version", ""), "schema_version");
  if (schema != 1) invalid("schema_version", "unsupported version");

  sc.dimension = as_int(require(root, "dimension", ""), "dimension");
  if (sc.dimension < 1) invalid("dimension", "must be >= 1");
  sc.name = root.contains("name") ? as_string(root["name"], "name") : "scenario";

  const json& factors = require(root, "factors", "");
  if (!factors.is_array() || factors.empty())
    invalid("factors", "expected a non-empty array (first-applied factor first)");
  bool symbolic_ok = true;
  std::vector<SymbolicFactor> symbolic;
  std::set<std::string> labels;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const std::string field = "factors[" + std::to_string(k) + "]";
    const json& f = factors[k];
    const std::string label = as_string(require(f, "label", field), field + ".label");
    if (!labels.insert(label).second)
      invalid(field + ".label", "duplicate factor label '" + label + "'");
    const Matrix generator =
        parse_matrix_spec(require(f, "generator", field), sc.dimension, field + ".generator");
    CoefficientFn coeff =
        parse_coefficient(require(f, "coefficient", field), field + ".coefficient");
    sc.factors.push_back(
        std::make_shared<SeparableFactor>(label, generator, coeff));
    if (f["generator"].is_string()) {
      if (auto mono = builtin_weyl_monomial(f["generator"].get<std::string>())) {
        symbolic.push_back({label, WeylPolynomial::monomial(mono->x_pow, mono->p_pow)});
        continue;
      }
    }
    symbolic_ok = false;
  }
  if (symbolic_ok) sc.symbolic_factors = std::move(symbolic);

  const json& ham = require(root, "hamiltonian", "");
  const std::string mode = as_string(require(ham, "mode", "hamiltonian"), "hamiltonian.mode");
  if (mode == "top_down") sc.hamiltonian_mode = HamiltonianInput::Mode::top_down;
  else if (mode == "bottom_up") sc.hamiltonian_mode = HamiltonianInput::Mode::bottom_up;
  else invalid("hamiltonian.mode", "expected 'top_down' or 'bottom_up'");
  const json& terms = require(ham, "terms", "hamiltonian");
  if (!terms.is_array() || terms.empty())
    invalid("hamiltonian.terms", "expected a non-empty array");
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const std::string field = "hamiltonian.terms[" + std::to_string(k) + "]";
    const json& term = terms[k];
    sc.hamiltonian_terms.push_back(
        {parse_coefficient(require(term, "coefficient", field), field + ".coefficient"),
         parse_matrix_spec(require(term, "matrix", field), sc.dimension,
                           field + ".matrix")});
  }

  sc.picture = as_int(require(root, "picture", ""), "picture");
  const int n_factors = static_cast<int>(sc.factors.size());
  if (sc.picture < 0 || sc.picture > n_factors)
    invalid("picture", "must lie in [0, " + std::to_string(n_factors) + "]");

  const json& time = require(root, "time", "");
  sc.grid.start = as_number(require(time, "start", "time"), "time.start");
  sc.grid.end = as_number(require(time, "end", "time"), "time.end");
  sc.grid.step = as_number(require(time, "step", "time"), "time.step");
  const std::string method =
      time.contains("method") ? as_string(time["method"], "time.method") : "rk4";
  if (method == "rk4") sc.grid.method = TimeGrid::Method::rk4;
  else if (method == "rk45") sc.grid.method = TimeGrid::Method::rk45;
  else invalid("time.method", "expected 'rk4' or 'rk45'");
  if (time.contains("rel_tol"))
    sc.grid.rel_tol = as_number(time["rel_tol"], "time.rel_tol");
  if (time.contains("abs_tol"))
    sc.grid.abs_tol = as_number(time["abs_tol"], "time.abs_tol");
  try {
    sc.grid.validate();
  } catch (const ValidationError& e) {
    invalid("time", e.what());
  }

  sc.initial_ket =
      parse_vector(require(root, "initial_state", ""), sc.dimension, "initial_state");

  if (root.contains("ensemble")) {
    const json& ens = root["ensemble"];
    const json& states = require(ens, "states", "ensemble");
    const json& weights = require(ens, "weights", "ensemble");
    if (!states.is_array() || states.empty())
      invalid("ensemble.states", "expected a non-empty array");
    if (!weights.is_array() || weights.size() != states.size())
      invalid("ensemble.weights", "expected one weight per state");
    double sum = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k) {
      sc.ensemble_kets.push_back(
          parse_vector(states[k], sc.dimension, "ensemble.states[" + std::to_string(k) + "]"));
      const double w = as_number(weights[k], "ensemble.weights[" + std::to_string(k) + "]");
      if (!(w > 0.0))
        invalid("ensemble.weights[" + std::to_string(k) + "]", "weights must be positive");
      sc.ensemble_weights.push_back(w);
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      invalid("ensemble.weights", "weights must sum to 1 (got " + std::to_string(sum) + ")");
  }

  if (root.contains("observables")) {
    const json& obs = root["observables"];
    if (!obs.is_array()) invalid("observables", "expected an array");
    for (std::size_t k = 0; k < obs.size(); ++k) {
      const std::string field = "observables[" + std::to_string(k) + "]";
      const json& o = obs[k];
      Observable entry;
      entry.name = as_string(require(o, "name", field), field + ".name");
      entry.matrix = parse_matrix_spec(require(o, "matrix", field), sc.dimension,
                                       field + ".matrix");
      entry.defined_in_picture =
          as_int(require(o, "defined_in_picture", field), field + ".defined_in_picture");
      if (entry.defined_in_picture < 0 || entry.defined_in_picture > n_factors)
        invalid(field + ".defined_in_picture",
                "must lie in [0, " + std::to_string(n_factors) + "]");
      sc.observables.push_back(std::move(entry));
    }
  }

  if (root.contains("outputs")) {
    const json& outputs = root["outputs"];
    if (outputs.contains("csv")) file.csv_path = as_string(outputs["csv"], "outputs.csv");
    if (outputs.contains("report"))
      file.report_path = as_string(outputs["report"], "outputs.report");
  }

  file.echo = root.dump(2);
  return file;
}

json echo_builtin(const std::string& name, const json& params) {
  json j;
  j["builtin"] = name;
  j["parameters"] = params;
  return j;
}

}  // namespace

ScenarioFile parse_scenario_text(const std::string& text, const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed scenario JSON (" + origin + "): " + e.what());
  }
  if (!root.is_object())
    throw ParseError("scenario JSON must be an object (" + origin + ")");
  return from_json(root);
}

ScenarioFile parse_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path);
}

ScenarioFile builtin_scenario(const std::string& name) {
  ScenarioFile file;
  if (name == "two-level") {
    file.scenario = build_two_level_toy(0.3, 0.2);
    file.echo = echo_builtin(name, json{{"a", 0.3}, {"b", 0.2}}).dump(2);
  } else if (name == "fring-tenney") {
    SigmaParametrization param{CoefficientFn("1+t^2"), 0.0};
    file.scenario = build_fring_tenney_scenario(
        16, CoefficientFn("0.05*t"), CoefficientFn("0.008*t"), CoefficientFn("0.03*t"),
        CoefficientFn("0.04*t"), param);
    file.echo = echo_builtin(name, json{{"dimension", 16},
                                        {"alpha", "0.05*t"},
                                        {"beta", "0.008*t"},
                                        {"gamma", "0.03*t"},
                                        {"delta", "0.04*t"},
                                        {"sigma", "1+t^2"},
                                        {"c2", 0.0}})
                    .dump(2);
  } else if (name == "jones-mateo") {
    file.scenario = build_jones_mateo_scenario(1.0, 64);
    file.echo = echo_builtin(name, json{{"g", 1.0}, {"dimension", 64}}).dump(2);
  } else {
    throw ValidationError("unknown builtin scenario '" + name + "'");
  }
  return file;
}

ScenarioFile load_scenario(const std::string& path_or_name) {
  if (path_or_name == "two-level" || path_or_name == "fring-tenney" ||
      path_or_name == "jones-mateo")
    return builtin_scenario(path_or_name);
  return parse_scenario(path_or_name);
}

}  // namespace corforge
