#include "corforge/runner.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "corforge/errors.hpp"

namespace corforge {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct Prepared {
  ModelScenario sc;
  FactorizedDysonMap map;
  HamiltonianInput input;
  int picture = 0;
};

Prepared prepare(const ScenarioFile& file, const RunOptions& options) {
  Prepared p{file.scenario, file.scenario.dyson_map(),
             file.scenario.hamiltonian_input(),
             options.picture.value_or(file.scenario.picture)};
  if (p.picture < 0 || p.picture > p.map.size())
    throw ValidationError("--picture must lie in [0, " +
                          std::to_string(p.map.size()) + "]");
  return p;
}

// Ket given in the scenario picture at t_start, dressed with the metric
// there, then walked rung by rung to the requested picture.
StatePair initial_state(const Prepared& p, int target_picture) {
  const double t0 = p.sc.grid.start;
  StatePair s;
  s.picture = p.sc.picture;
  s.ket = p.sc.initial_ket;
  s.conjugate = p.map.metric(s.picture, t0) * s.ket;
  while (s.picture < target_picture) s = map_state(s, MapDirection::up, p.map, t0);
  while (s.picture > target_picture) s = map_state(s, MapDirection::down, p.map, t0);
  return s;
}

// Conventional-picture representative of an observable declared in picture q
// at t_start: a = Omega_[q](t0) O Omega_[q]^{-1}(t0).
Matrix schrodinger_rep(const FactorizedDysonMap& map, const Observable& obs,
                       double t0) {
  const Matrix part = map.partial_product(obs.defined_in_picture, t0);
  return part * obs.matrix * invert(part, "partial product");
}

// Picture-j representative at time t of a conventional-picture constant.
Matrix picture_rep(const FactorizedDysonMap& map, const Matrix& a_const, int j,
                   double t) {
  const Matrix part = map.partial_product(j, t);
  return invert(part, "partial product") * a_const * part;
}

// Observable expectations along a ket trajectory, plus quasi-Hermiticity /
// derived-Hamiltonian diagnostics sampled at the recorded times.
void attach_observables(EvolutionResult& result, const Prepared& p) {
  const double t0 = p.sc.grid.start;
  std::vector<Matrix> constants;
  constants.reserve(p.sc.observables.size());
  for (const Observable& obs : p.sc.observables)
    constants.push_back(schrodinger_rep(p.map, obs, t0));

  for (std::size_t o = 0; o < p.sc.observables.size(); ++o) {
    result.scalar_names.push_back(p.sc.observables[o].name);
    result.scalars.emplace_back();
  }
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    const double t = result.times[i];
    const Matrix part = p.map.partial_product(p.picture, t);
    const Matrix part_inv = invert(part, "partial product");
    StatePair s{p.picture, result.kets[i], result.conjugate_kets[i]};
    for (std::size_t o = 0; o < constants.size(); ++o) {
      const Matrix a_j = part_inv * constants[o] * part;
      result.scalars[o].push_back(physical_expectation(s, a_j));
    }
  }
}

void attach_hamiltonian_diagnostics(EvolutionResult& result, const Prepared& p) {
  const bool top_down = p.input.mode == HamiltonianInput::Mode::top_down;
  const std::string key = top_down ? "qh_residual" : "derived_h_hermiticity";
  auto& series = result.diagnostics[key];
  for (double t : result.times) {
    const PictureFamily fam = PictureFamily::build(p.map, p.input, t);
    if (top_down) {
      const Matrix& h_j = fam.hamiltonians[static_cast<std::size_t>(p.picture)];
      const Matrix& theta = fam.metrics[static_cast<std::size_t>(p.picture)];
      series.push_back((h_j.adjoint() * theta - theta * h_j).norm());
    } else {
      const Matrix& h_top = fam.hamiltonians.back();
      series.push_back((h_top - h_top.adjoint()).norm());
    }
  }
}

double max_drift(const std::vector<double>& series) {
  double drift = 0.0;
  for (double v : series) drift = std::max(drift, std::abs(v - series.front()));
  return drift;
}

double series_max(const std::vector<double>& series) {
  double m = 0.0;
  for (double v : series) m = std::max(m, v);
  return m;
}

Matrix full_product_fd(const FactorizedDysonMap& map, double t, double h) {
  return (map.full_product(t + h) - map.full_product(t - h)) / (2.0 * h);
}

// i Omega^{-1} dOmega/dt by central differences on the full product: the
// derivative-free route every recursion result is checked against.
Matrix direct_coriolis_fd(const FactorizedDysonMap& map, double t, double h) {
  return Complex(0.0, 1.0) * invert(map.full_product(t), "full Dyson map") *
         full_product_fd(map, t, h);
}

Ensemble scenario_ensemble(const Prepared& p, int target_picture) {
  const double t0 = p.sc.grid.start;
  std::vector<Vector> kets = p.sc.ensemble_kets;
  std::vector<double> weights = p.sc.ensemble_weights;
  if (kets.empty()) {
    // Synthesize a two-state mixture: basis vectors orthonormalized in the
    // Theta(t0) inner product of the scenario picture.
    const Matrix theta = p.map.metric(p.sc.picture, t0);
    Vector e0 = Vector::Zero(p.sc.dimension);
    Vector e1 = Vector::Zero(p.sc.dimension);
    e0(0) = Complex(1, 0);
    e1(1 % p.sc.dimension) = Complex(1, 0);
    e0 /= std::sqrt(std::abs((e0.adjoint() * theta * e0)(0, 0)));
    const Complex overlap = (e0.adjoint() * theta * e1)(0, 0);
    e1 -= overlap * e0;
    e1 /= std::sqrt(std::abs((e1.adjoint() * theta * e1)(0, 0)));
    kets = {e0, e1};
    weights = {0.7, 0.3};
  }
  Ensemble ens;
  ens.weights = weights;
  for (const Vector& ket : kets) {
    StatePair s;
    s.picture = p.sc.picture;
    s.ket = ket;
    s.conjugate = p.map.metric(p.sc.picture, t0) * ket;
    while (s.picture < target_picture) s = map_state(s, MapDirection::up, p.map, t0);
    while (s.picture > target_picture) s = map_state(s, MapDirection::down, p.map, t0);
    ens.states.push_back(std::move(s));
  }
  return ens;
}

// --- artifact paths -----------------------------------------------------

std::string resolve_path(const std::string& configured, const std::string& fallback,
                         const RunOptions& options) {
  namespace fs = std::filesystem;
  fs::path path = configured.empty() ? fs::path(fallback) : fs::path(configured);
  if (options.out_dir) {
    fs::create_directories(*options.out_dir);
    path = fs::path(*options.out_dir) / path.filename();
  } else if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  return path.string();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

void add_check(RunReport& report, std::string name, double residual,
               double tolerance, bool applicable = true) {
  InvariantCheck c;
  c.name = std::move(name);
  c.residual = residual;
  c.tolerance = tolerance;
  c.applicable = applicable;
  c.pass = !applicable || residual <= tolerance;
  report.invariants.push_back(std::move(c));
}

// --- commands -------------------------------------------------------------

EvolutionResult simulate_once(const Prepared& p, int j) {
  const StatePair s0 = initial_state(p, j);
  Prepared q = p;
  q.picture = j;
  EvolutionResult result = integrate_schrodinger(p.map, p.input, j, s0, p.sc.grid);
  attach_observables(result, q);
  attach_hamiltonian_diagnostics(result, q);
  return result;
}

void run_simulate(const Prepared& p, const ScenarioFile& file,
                  const RunOptions& options, RunReport& report) {
  Timer timer;
  EvolutionResult result = simulate_once(p, p.picture);
  report.timings_ms.push_back(
      {"picture_" + std::to_string(p.picture) + "_ms", timer.ms()});

  add_check(report, "norm_conservation",
            max_drift(result.diagnostics.at("physical_norm")), 1e-8);

  const std::string csv = resolve_path(
      file.csv_path, p.sc.name + "_simulate.csv", options);
  write_file(csv, csv_string(result));
  report.artifacts.push_back(csv);
}

void run_heisenberg(const Prepared& p, const ScenarioFile& file,
                    const RunOptions& options, RunReport& report) {
  if (p.sc.observables.empty())
    throw ValidationError("heisenberg needs at least one observable");
  const Observable& obs = p.sc.observables.front();
  const double t0 = p.sc.grid.start;
  const double t1 = p.sc.grid.end;

  Timer timer;
  const Matrix a_const = schrodinger_rep(p.map, obs, t0);
  const Matrix a0 = picture_rep(p.map, a_const, p.picture, t0);
  EvolutionResult result = integrate_heisenberg(p.map, p.picture, a0, p.sc.grid);

  const StatePair frozen = initial_state(p, p.picture);
  result.scalar_names.push_back(obs.name);
  result.scalars.emplace_back();
  for (const Matrix& a : result.operators)
    result.scalars.back().push_back(physical_expectation(frozen, a));

  const double oracle =
      (result.operators.back() - picture_rep(p.map, a_const, p.picture, t1)).norm();
  report.timings_ms.push_back(
      {"picture_" + std::to_string(p.picture) + "_ms", timer.ms()});
  add_check(report, "heisenberg_oracle", oracle, 1e-6);

  const std::string csv =
      resolve_path(file.csv_path, p.sc.name + "_heisenberg.csv", options);
  write_file(csv, csv_string(result));
  report.artifacts.push_back(csv);
}

void run_density(const Prepared& p, const ScenarioFile& file,
                 const RunOptions& options, RunReport& report) {
  Timer timer;
  const Ensemble ens = scenario_ensemble(p, p.picture);
  EvolutionResult result =
      integrate_density(p.map, p.input, p.picture, ens, p.sc.grid);

  // Mixed-state expectations tr(rho_j A_j) along the flow.
  const double t0 = p.sc.grid.start;
  std::vector<Matrix> constants;
  for (const Observable& obs : p.sc.observables) {
    constants.push_back(schrodinger_rep(p.map, obs, t0));
    result.scalar_names.push_back(obs.name);
    result.scalars.emplace_back();
  }
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    const Matrix part = p.map.partial_product(p.picture, result.times[i]);
    const Matrix part_inv = invert(part, "partial product");
    for (std::size_t o = 0; o < constants.size(); ++o) {
      const Matrix a_j = part_inv * constants[o] * part;
      result.scalars[o].push_back((result.operators[i] * a_j).trace());
    }
  }

  report.timings_ms.push_back(
      {"picture_" + std::to_string(p.picture) + "_ms", timer.ms()});
  add_check(report, "density_trace",
            series_max(result.diagnostics.at("trace_drift")), 1e-10);
  add_check(report, "density_spectrum",
            series_max(result.diagnostics.at("spectral_drift")), 1e-7);

  const std::string csv =
      resolve_path(file.csv_path, p.sc.name + "_density.csv", options);
  write_file(csv, csv_string(result));
  report.artifacts.push_back(csv);
}

void run_metric(const Prepared& p, const ScenarioFile& file,
                const RunOptions& options, RunReport& report) {
  Timer timer;
  EvolutionResult result = integrate_metric(p.map, p.sc.grid);
  report.timings_ms.push_back({"metric_ms", timer.ms()});

  add_check(report, "metric_ode_oracle",
            series_max(result.diagnostics.at("metric_direct_residual")), 1e-8);
  add_check(report, "metric_hermiticity",
            series_max(result.diagnostics.at("hermiticity_residual")), 1e-9);

  const std::string csv =
      resolve_path(file.csv_path, p.sc.name + "_metric.csv", options);
  write_file(csv, csv_string(result));
  report.artifacts.push_back(csv);
}

void run_spectrum(const Prepared& p, const ScenarioFile& file,
                  const RunOptions& options, RunReport& report) {
  Timer timer;
  const double t0 = p.sc.grid.start;
  Matrix h0;
  if (p.input.mode == HamiltonianInput::Mode::top_down) {
    h0 = p.input.op(t0);
  } else {
    h0 = PictureFamily::build(p.map, p.input, t0).hamiltonians.back();
  }
  const int k = std::min<int>(8, p.sc.dimension);
  const std::vector<Complex> values = spectrum_lowest(h0, k);

  std::vector<Complex> refined;
  if (p.sc.hamiltonian_builder) {
    const int d_big = p.sc.dimension + p.sc.dimension / 2;
    refined = spectrum_lowest(p.sc.hamiltonian_builder(d_big), k);
  }

  std::ostringstream csv_text;
  csv_text << "n,energy_re,energy_im";
  if (!refined.empty()) csv_text << ",convergence";
  csv_text << "\n";
  for (int n = 0; n < k; ++n) {
    csv_text << n << "," << fmt17(values[static_cast<std::size_t>(n)].real()) << ","
             << fmt17(values[static_cast<std::size_t>(n)].imag());
    if (!refined.empty())
      csv_text << ","
               << fmt17(std::abs(values[static_cast<std::size_t>(n)] -
                                 refined[static_cast<std::size_t>(n)]));
    csv_text << "\n";
  }
  report.timings_ms.push_back({"spectrum_ms", timer.ms()});

  double max_imag = 0.0;
  for (const Complex& v : values) max_imag = std::max(max_imag, std::abs(v.imag()));
  add_check(report, "spectrum_reality", max_imag, 1e-9, diagnostics(h0).hermitian);
  if (!refined.empty()) {
    double conv = 0.0;
    for (int n = 0; n < std::min(5, k); ++n)
      conv = std::max(conv, std::abs(values[static_cast<std::size_t>(n)] -
                                     refined[static_cast<std::size_t>(n)]));
    add_check(report, "spectrum_convergence", conv, 1e-6);
  }

  const std::string csv =
      resolve_path(file.csv_path, p.sc.name + "_spectrum.csv", options);
  write_file(csv, csv_text.str());
  report.artifacts.push_back(csv);
}

void run_coriolis(const Prepared& p, const ScenarioFile& file,
                  const RunOptions& options, RunReport& report) {
  Timer timer;
  const TimeGrid& grid = p.sc.grid;
  const int samples = std::min(grid.method == TimeGrid::Method::rk4
                                   ? grid.n_steps()
                                   : 200,
                               200);
  const double span = grid.end - grid.start;
  const double fd_step = 1e-5;

  EvolutionResult result;
  for (int n = 1; n <= p.map.size(); ++n)
    result.diagnostics["sigma" + std::to_string(n) + "_fro"];
  for (int i = 0; i <= samples; ++i) {
    const double t = grid.start + span * i / samples;
    result.times.push_back(t);
    const std::vector<Matrix> chain = composite_coriolis_chain(p.map, t);
    for (int n = 1; n <= p.map.size(); ++n)
      result.diagnostics["sigma" + std::to_string(n) + "_fro"].push_back(
          chain[static_cast<std::size_t>(n - 1)].norm());
    result.diagnostics["recursion_vs_direct"].push_back(
        (chain[0] - direct_coriolis_fd(p.map, t, fd_step)).norm());
  }
  report.timings_ms.push_back({"coriolis_ms", timer.ms()});
  add_check(report, "coriolis_recursion_vs_direct",
            series_max(result.diagnostics.at("recursion_vs_direct")), 1e-6);

  if (options.symbolic) {
    if (p.sc.symbolic_factors.empty())
      throw ValidationError(
          "--symbolic needs factors whose generators are monomials in x or p");
    const std::vector<WeylPolynomial> chain =
        composite_coriolis_symbolic(p.sc.symbolic_factors);
    for (std::size_t n = chain.size(); n >= 1; --n)
      report.messages.push_back("Sigma_" + std::to_string(n) + " = " +
                                chain[n - 1].str());
  }

  const std::string csv =
      resolve_path(file.csv_path, p.sc.name + "_coriolis.csv", options);
  write_file(csv, csv_string(result));
  report.artifacts.push_back(csv);
}

void run_verify(const Prepared& p, const ScenarioFile& file,
                const RunOptions& options, RunReport& report) {
  // Verification always integrates with the fixed-step method so that
  // trajectories in different pictures share their time grids.
  Prepared q = p;
  q.sc.grid.method = TimeGrid::Method::rk4;
  const TimeGrid& grid = q.sc.grid;
  const int n_pictures = q.map.size() + 1;
  const double t1 = grid.end;

  // Recursion vs the finite-difference full product.
  {
    double worst = 0.0;
    for (int i = 0; i <= 10; ++i) {
      const double t = grid.start + (grid.end - grid.start) * i / 10.0;
      const std::vector<Matrix> chain = composite_coriolis_chain(q.map, t);
      worst = std::max(worst,
                       (chain[0] - direct_coriolis_fd(q.map, t, 1e-5)).norm());
    }
    add_check(report, "coriolis_recursion_vs_direct", worst, 1e-6);
  }

  // One Schroedinger run per picture: norm drift and expectation
  // trajectories for the picture-independence comparison.
  std::vector<EvolutionResult> runs;
  double norm_drift = 0.0;
  for (int j = 0; j < n_pictures; ++j) {
    Timer timer;
    Prepared pj = q;
    pj.picture = j;
    EvolutionResult r = simulate_once(pj, j);
    norm_drift = std::max(norm_drift, max_drift(r.diagnostics.at("physical_norm")));
    report.timings_ms.push_back({"picture_" + std::to_string(j) + "_ms", timer.ms()});
    runs.push_back(std::move(r));
  }
  add_check(report, "norm_conservation", norm_drift, 1e-8);

  {
    double worst = 0.0;
    const bool have_obs = !q.sc.observables.empty();
    if (have_obs) {
      for (int j = 1; j < n_pictures; ++j) {
        for (std::size_t o = 0; o < q.sc.observables.size(); ++o) {
          for (std::size_t i = 0; i < runs[0].times.size(); ++i) {
            worst = std::max(worst,
                             std::abs(runs[static_cast<std::size_t>(j)].scalars[o][i] -
                                      runs[0].scalars[o][i]));
          }
        }
      }
    }
    add_check(report, "picture_independence", worst, 1e-7, have_obs);
  }

  // Heisenberg flow in the fully non-Hermitian picture against the direct
  // conjugation of the constant observable.
  {
    double worst = 0.0;
    const bool have_obs = !q.sc.observables.empty();
    if (have_obs) {
      const Matrix a_const =
          schrodinger_rep(q.map, q.sc.observables.front(), grid.start);
      const Matrix a0 = picture_rep(q.map, a_const, 0, grid.start);
      EvolutionResult r = integrate_heisenberg(q.map, 0, a0, grid);
      worst = (r.operators.back() - picture_rep(q.map, a_const, 0, t1)).norm();
    }
    add_check(report, "heisenberg_oracle", worst, 1e-6, have_obs);
  }

  // Density flow: trace and spectrum invariance.
  {
    const Ensemble ens = scenario_ensemble(q, q.picture);
    EvolutionResult r = integrate_density(q.map, q.input, q.picture, ens, grid);
    add_check(report, "density_trace", series_max(r.diagnostics.at("trace_drift")),
              1e-10);
    add_check(report, "density_spectrum",
              series_max(r.diagnostics.at("spectral_drift")), 1e-7);
  }

  // Metric evolution law against the direct construction.
  {
    EvolutionResult r = integrate_metric(q.map, grid);
    add_check(report, "metric_ode_oracle",
              series_max(r.diagnostics.at("metric_direct_residual")), 1e-8);
  }

  // Quasi-Hermiticity across all pictures (binding only for a Hermitian
  // top-down Hamiltonian) and metric positivity.
  {
    const bool top_down = q.input.mode == HamiltonianInput::Mode::top_down;
    double worst = 0.0;
    double min_eig = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10; ++i) {
      const double t = grid.start + (grid.end - grid.start) * i / 10.0;
      const PictureFamily fam = PictureFamily::build(q.map, q.input, t);
      for (int j = 0; j < n_pictures; ++j) {
        const Matrix& h_j = fam.hamiltonians[static_cast<std::size_t>(j)];
        const Matrix& theta = fam.metrics[static_cast<std::size_t>(j)];
        if (top_down)
          worst = std::max(worst, (h_j.adjoint() * theta - theta * h_j).norm());
        min_eig = std::min(min_eig, diagnostics(theta).min_eigenvalue);
      }
      if (!top_down) {
        const Matrix& h_top = fam.hamiltonians.back();
        worst = std::max(worst, (h_top - h_top.adjoint()).norm());
      }
    }
    add_check(report, top_down ? "quasi_hermiticity" : "derived_h_hermiticity",
              worst, top_down ? 1e-9 : 0.0, top_down);
    add_check(report, "metric_positivity", std::max(0.0, -min_eig), 0.0);
    if (!(min_eig > 0.0)) report.invariants.back().pass = false;
  }

  (void)file;
  (void)options;
}

void run_sweep(const Prepared& p, const ScenarioFile& file,
               const RunOptions& options, RunReport& report) {
  const int n_pictures = p.map.size() + 1;
  struct SweepPoint {
    EvolutionResult result;
    double elapsed_ms = 0.0;
  };
  std::vector<SweepPoint> points(static_cast<std::size_t>(n_pictures));

  const auto run_one = [&](int j) {
    Timer timer;
    Prepared pj = p;
    pj.picture = j;
    SweepPoint point;
    point.result = simulate_once(pj, j);
    point.elapsed_ms = timer.ms();
    return point;
  };

  const int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    for (int j = 0; j < n_pictures; ++j)
      points[static_cast<std::size_t>(j)] = run_one(j);
  } else {
    std::vector<std::future<SweepPoint>> futures;
    futures.reserve(static_cast<std::size_t>(n_pictures));
    for (int j = 0; j < n_pictures; ++j)
      futures.push_back(std::async(std::launch::async, run_one, j));
    for (int j = 0; j < n_pictures; ++j)
      points[static_cast<std::size_t>(j)] = futures[static_cast<std::size_t>(j)].get();
  }

  // Artifacts and report entries merged in picture order, independent of
  // scheduling.
  const PictureFamily initial_family =
      PictureFamily::build(p.map, p.input, p.sc.grid.start);
  for (int j = 0; j < n_pictures; ++j) {
    SweepPoint& point = points[static_cast<std::size_t>(j)];
    add_check(report, "norm_conservation_j" + std::to_string(j),
              max_drift(point.result.diagnostics.at("physical_norm")), 1e-8);
    // Informational: the generators with j < N need not be quasi-Hermitian
    // and may carry complex spectrum; reported, never gated on.
    double max_imag = 0.0;
    for (const Complex& v : spectrum_lowest(
             initial_family.generators[static_cast<std::size_t>(j)], p.sc.dimension))
      max_imag = std::max(max_imag, std::abs(v.imag()));
    add_check(report, "generator_spectrum_max_imag_j" + std::to_string(j), max_imag,
              0.0, /*applicable=*/false);
    report.timings_ms.push_back(
        {"picture_" + std::to_string(j) + "_ms", point.elapsed_ms});
    const std::string csv = resolve_path(
        "", p.sc.name + "_sweep_j" + std::to_string(j) + ".csv", options);
    write_file(csv, csv_string(point.result));
    report.artifacts.push_back(csv);
  }
  (void)file;
}

}  // namespace

std::string csv_string(const EvolutionResult& result) {
  std::ostringstream os;
  os << "t";
  for (const std::string& name : result.scalar_names)
    os << "," << name << "_re," << name << "_im";
  for (const auto& [key, series] : result.diagnostics) os << "," << key;
  os << "\n";

  for (std::size_t s = 0; s < result.scalars.size(); ++s)
    if (result.scalars[s].size() != result.times.size())
      throw ValidationError("scalar series misaligned with time grid");
  for (const auto& [key, series] : result.diagnostics)
    if (series.size() != result.times.size())
      throw ValidationError("diagnostic series misaligned with time grid: " + key);

  for (std::size_t i = 0; i < result.times.size(); ++i) {
    os << fmt17(result.times[i]);
    for (std::size_t s = 0; s < result.scalars.size(); ++s)
      os << "," << fmt17(result.scalars[s][i].real()) << ","
         << fmt17(result.scalars[s][i].imag());
    for (const auto& [key, series] : result.diagnostics) os << "," << fmt17(series[i]);
    os << "\n";
  }
  return os.str();
}

void emit_csv(const EvolutionResult& result, const std::string& path) {
  if (result.times.empty()) throw ValidationError("refusing to emit an empty result");
  write_file(path, csv_string(result));
}

std::string RunReport::to_json(bool include_timings) const {
  json j;
  j["command"] = command;
  j["scenario"] = scenario_echo.empty() ? json() : json::parse(scenario_echo);
  j["invariants"] = json::array();
  for (const InvariantCheck& c : invariants) {
    j["invariants"].push_back({{"name", c.name},
                               {"residual", c.residual},
                               {"tolerance", c.tolerance},
                               {"pass", c.pass},
                               {"applicable", c.applicable}});
  }
  if (include_timings) {
    json t = json::object();
    for (const auto& [name, ms] : timings_ms) t[name] = ms;
    j["timings_ms"] = t;
  }
  j["artifacts"] = artifacts;
  j["messages"] = messages;
  j["exit_status"] = exit_status;
  return j.dump(2) + "\n";
}

RunReport run_command(const std::string& command, const ScenarioFile& file,
                      const RunOptions& options) {
  Prepared p = prepare(file, options);
  RunReport report;
  report.command = command;
  report.scenario_echo = file.echo;

  if (command == "simulate") run_simulate(p, file, options, report);
  else if (command == "heisenberg") run_heisenberg(p, file, options, report);
  else if (command == "density") run_density(p, file, options, report);
  else if (command == "metric") run_metric(p, file, options, report);
  else if (command == "verify") run_verify(p, file, options, report);
  else if (command == "spectrum") run_spectrum(p, file, options, report);
  else if (command == "coriolis") run_coriolis(p, file, options, report);
  else if (command == "sweep") run_sweep(p, file, options, report);
  else throw ValidationError("unknown command '" + command + "'");

  for (const InvariantCheck& c : report.invariants)
    if (c.applicable && !c.pass) report.exit_status = 3;

  const std::string report_path = resolve_path(
      file.report_path, p.sc.name + "_" + command + "_report.json", options);
  write_file(report_path, report.to_json());
  report.artifacts.push_back(report_path);
  return report;
}

}  // namespace corforge
