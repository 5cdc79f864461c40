#pragma once

#include <map>
#include <string>
#include <vector>

#include "corforge/pictures.hpp"

namespace corforge {

/// Integration window and method. The fixed-step method takes
/// round((end-start)/step) equal steps; identical inputs produce
/// bit-identical trajectories.
struct TimeGrid {
  enum class Method { rk4, rk45 };

  double start = 0.0;
  double end = 1.0;
  double step = 1e-3;
  Method method = Method::rk4;
  double rel_tol = 1e-9;  // rk45 only
  double abs_tol = 1e-12;

  int n_steps() const;
  void validate() const;
};

/// Time grid plus whatever the integration tracked: state pairs, operator
/// snapshots, named scalar series (observable expectations attached by the
/// runner) and named real diagnostic series, all aligned with `times`.
struct EvolutionResult {
  std::vector<double> times;
  std::vector<Vector> kets;
  std::vector<Vector> conjugate_kets;
  std::vector<Matrix> operators;
  std::vector<std::string> scalar_names;
  std::vector<std::vector<Complex>> scalars;  // [scalar][time]
  std::map<std::string, std::vector<double>> diagnostics;
};

/// Statistical mixture with constant weights; weights must sum to one.
struct Ensemble {
  std::vector<StatePair> states;
  std::vector<double> weights;

  void validate() const;
};

/// Schroedinger flow of picture j (Theorems on ket/conjugate-ket pairs):
///   i d/dt ket = G_j ket,   i d/dt conjugate = G_j^dag conjugate.
/// Records the physical norm <<psi|psi>> per step; it is conserved exactly
/// by the flow and to integrator accuracy by the discretization.
EvolutionResult integrate_schrodinger(const FactorizedDysonMap& map,
                                      const HamiltonianInput& input, int j,
                                      const StatePair& state0, const TimeGrid& grid);

/// Heisenberg-type flow of a picture-j observable whose conventional-picture
/// representative is constant:  i dA/dt = A Sigma_{j+1} - Sigma_{j+1} A.
/// At j = N the right side vanishes and A stays put.
EvolutionResult integrate_heisenberg(const FactorizedDysonMap& map, int j,
                                     const Matrix& a0, const TimeGrid& grid);

/// Liouvillean flow i d/dt rho_j = G_j rho_j - rho_j G_j, seeded from the
/// ensemble via density_from_ensemble. Records trace and eigenvalue drift.
EvolutionResult integrate_density(const FactorizedDysonMap& map,
                                  const HamiltonianInput& input, int j,
                                  const Ensemble& ensemble0, const TimeGrid& grid);

/// Metric evolution law i d/dt Theta = Theta Sigma - Sigma^dag Theta with
/// Sigma the full composite Coriolis operator; each step is compared against
/// the direct construction Theta = Omega^dag Omega.
EvolutionResult integrate_metric(const FactorizedDysonMap& map, const TimeGrid& grid);

/// rho_j = sum_k ket_k * p_k / <<psi_k|psi_k>> * conjugate_k^dag. Unit trace
/// by construction; generally non-Hermitian when the metric is nontrivial.
Matrix density_from_ensemble(const Ensemble& ensemble);

}  // namespace corforge
