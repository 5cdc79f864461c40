#include "corforge/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>

#include "corforge/errors.hpp"

namespace corforge {

int TimeGrid::n_steps() const {
  return static_cast<int>(std::llround((end - start) / step));
}

void TimeGrid::validate() const {
  if (!(end > start)) throw ValidationError("time grid needs end > start");
  if (!(step > 0.0)) throw ValidationError("time grid needs step > 0");
  if (method == Method::rk4 && n_steps() < 1)
    throw ValidationError("time grid step exceeds the integration window");
  if (method == Method::rk45 && (rel_tol <= 0.0 || abs_tol <= 0.0))
    throw ValidationError("adaptive tolerances must be positive");
}

void Ensemble::validate() const {
  if (states.empty()) throw ValidationError("ensemble has no states");
  if (states.size() != weights.size())
    throw ValidationError("ensemble states/weights length mismatch");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw ValidationError("ensemble weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    throw ValidationError("ensemble weights must sum to one");
  for (const StatePair& s : states)
    if (s.picture != states.front().picture)
      throw ValidationError("ensemble states live in different pictures");
}

namespace {

using Rhs = std::function<Matrix(double, const Matrix&)>;
using StepObserver = std::function<void(double, const Matrix&)>;

// Caches the most recent picture family; RK stages revisit the midpoint time
// and the step endpoint becomes the next step's start, so a one-entry memo
// removes most rebuilds without any cross-run state.
class FamilyCache {
 public:
  FamilyCache(const FactorizedDysonMap& map, const HamiltonianInput& input)
      : map_(map), input_(input) {}

  const PictureFamily& at(double t) const {
    if (!last_ || last_t_ != t) {
      last_ = PictureFamily::build(map_, input_, t);
      last_t_ = t;
    }
    return *last_;
  }

 private:
  const FactorizedDysonMap& map_;
  const HamiltonianInput& input_;
  mutable std::optional<PictureFamily> last_;
  mutable double last_t_ = 0.0;
};

void rk4_fixed(const Matrix& y0, const TimeGrid& grid, const Rhs& rhs,
               const StepObserver& observe) {
  const int n = grid.n_steps();
  const double h = (grid.end - grid.start) / n;
  Matrix y = y0;
  observe(grid.start, y);
  for (int k = 0; k < n; ++k) {
    const double t = grid.start + k * h;
    const Matrix k1 = rhs(t, y);
    const Matrix k2 = rhs(t + 0.5 * h, y + (0.5 * h) * k1);
    const Matrix k3 = rhs(t + 0.5 * h, y + (0.5 * h) * k2);
    const Matrix k4 = rhs(t + h, y + h * k3);
    y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t_next = (k + 1 == n) ? grid.end : grid.start + (k + 1) * h;
    observe(t_next, y);
  }
}

// Dormand-Prince 5(4) embedded pair.
void rk45_adaptive(const Matrix& y0, const TimeGrid& grid, const Rhs& rhs,
                   const StepObserver& observe) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                      a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double span = grid.end - grid.start;
  const double h_min = 1e-12 * span;
  double h = std::min(grid.step, span);
  double t = grid.start;
  Matrix y = y0;
  observe(t, y);

  int rejects_in_a_row = 0;
  while (t < grid.end) {
    h = std::min(h, grid.end - t);
    const Matrix k1 = rhs(t, y);
    const Matrix k2 = rhs(t + c2 * h, y + h * (a21 * k1));
    const Matrix k3 = rhs(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const Matrix k4 = rhs(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Matrix k5 =
        rhs(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Matrix k6 = rhs(
        t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Matrix y_next =
        y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Matrix k7 = rhs(t + h, y_next);
    const Matrix err_mat =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err = 0.0;
    for (Eigen::Index col = 0; col < y.cols(); ++col) {
      for (Eigen::Index row = 0; row < y.rows(); ++row) {
        const double scale =
            grid.abs_tol + grid.rel_tol * std::max(std::abs(y(row, col)),
                                                   std::abs(y_next(row, col)));
        err = std::max(err, std::abs(err_mat(row, col)) / scale);
      }
    }

    if (err <= 1.0) {
      t = (grid.end - t - h < h_min) ? grid.end : t + h;
      y = y_next;
      observe(t, y);
      rejects_in_a_row = 0;
    } else if (++rejects_in_a_row > 64) {
      throw StepRejection("adaptive step rejected 64 times in a row");
    }
    const double factor =
        err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
    h *= std::clamp(factor, 0.2, 5.0);
    if (h < h_min)
      throw StepRejection("adaptive step underflow; tolerance unreachable");
  }
}

void integrate(const Matrix& y0, const TimeGrid& grid, const Rhs& rhs,
               const StepObserver& observe) {
  grid.validate();
  if (grid.method == TimeGrid::Method::rk4)
    rk4_fixed(y0, grid, rhs, observe);
  else
    rk45_adaptive(y0, grid, rhs, observe);
}

// Chained nearest-distance eigenvalue tracker for the drift diagnostics.
class SpectrumTracker {
 public:
  // Returns (max drift from the initial spectrum, pairing reliable?).
  std::pair<double, bool> update(const Matrix& m) {
    Eigen::ComplexEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success)
      throw EigensolverFailure("eigenvalue-drift tracker failed to converge");
    std::vector<Complex> fresh(solver.eigenvalues().data(),
                               solver.eigenvalues().data() + m.rows());
    bool reliable = min_gap(fresh) >= 1e-6;
    if (initial_.empty()) {
      initial_ = fresh;
      current_ = fresh;
      return {0.0, reliable};
    }
    // Greedy nearest matching of the previous labels onto the new values.
    std::vector<bool> used(fresh.size(), false);
    std::vector<Complex> matched(fresh.size());
    for (std::size_t k = 0; k < current_.size(); ++k) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t best_idx = 0;
      for (std::size_t m2 = 0; m2 < fresh.size(); ++m2) {
        if (used[m2]) continue;
        const double dist = std::abs(fresh[m2] - current_[k]);
        if (dist < best) {
          best = dist;
          best_idx = m2;
        }
      }
      used[best_idx] = true;
      matched[k] = fresh[best_idx];
    }
    current_ = matched;
    double drift = 0.0;
    for (std::size_t k = 0; k < current_.size(); ++k)
      drift = std::max(drift, std::abs(current_[k] - initial_[k]));
    return {drift, reliable};
  }

 private:
  static double min_gap(const std::vector<Complex>& vals) {
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < vals.size(); ++i)
      for (std::size_t j = i + 1; j < vals.size(); ++j)
        gap = std::min(gap, std::abs(vals[i] - vals[j]));
    return gap;
  }

  std::vector<Complex> initial_;
  std::vector<Complex> current_;
};

}  // namespace

EvolutionResult integrate_schrodinger(const FactorizedDysonMap& map,
                                      const HamiltonianInput& input, int j,
                                      const StatePair& state0,
                                      const TimeGrid& grid) {
  if (j < 0 || j > map.size())
    throw ValidationError("picture index out of range: " + std::to_string(j));
  if (state0.picture != j)
    throw ValidationError("initial state lives in a different picture");

  const Eigen::Index d = state0.ket.size();
  Matrix y0(d, 2);
  y0.col(0) = state0.ket;
  y0.col(1) = state0.conjugate;

  FamilyCache cache(map, input);
  const Complex minus_i(0.0, -1.0);
  const auto rhs = [&](double t, const Matrix& y) -> Matrix {
    const Matrix& g = cache.at(t).generators[static_cast<std::size_t>(j)];
    Matrix dy(d, 2);
    dy.col(0) = minus_i * (g * y.col(0));
    dy.col(1) = minus_i * (g.adjoint() * y.col(1));
    return dy;
  };

  EvolutionResult result;
  integrate(y0, grid, rhs, [&](double t, const Matrix& y) {
    result.times.push_back(t);
    result.kets.emplace_back(y.col(0));
    result.conjugate_kets.emplace_back(y.col(1));
    const Complex overlap = y.col(1).dot(y.col(0));
    result.diagnostics["physical_norm"].push_back(overlap.real());
  });
  return result;
}

EvolutionResult integrate_heisenberg(const FactorizedDysonMap& map, int j,
                                     const Matrix& a0, const TimeGrid& grid) {
  if (j < 0 || j > map.size())
    throw ValidationError("picture index out of range: " + std::to_string(j));

  const Complex minus_i(0.0, -1.0);
  const auto rhs = [&](double t, const Matrix& a) -> Matrix {
    const Matrix sigma =
        composite_coriolis_chain(map, t)[static_cast<std::size_t>(j)];
    return minus_i * (a * sigma - sigma * a);
  };

  EvolutionResult result;
  SpectrumTracker tracker;
  integrate(a0, grid, rhs, [&](double t, const Matrix& a) {
    result.times.push_back(t);
    result.operators.push_back(a);
    const auto [drift, reliable] = tracker.update(a);
    result.diagnostics["spectral_drift"].push_back(drift);
    result.diagnostics["eigen_pairing_reliable"].push_back(reliable ? 1.0 : 0.0);
  });
  return result;
}

EvolutionResult integrate_density(const FactorizedDysonMap& map,
                                  const HamiltonianInput& input, int j,
                                  const Ensemble& ensemble0, const TimeGrid& grid) {
  if (j < 0 || j > map.size())
    throw ValidationError("picture index out of range: " + std::to_string(j));
  ensemble0.validate();
  if (ensemble0.states.front().picture != j)
    throw ValidationError("ensemble lives in a different picture");

  const Matrix rho0 = density_from_ensemble(ensemble0);
  FamilyCache cache(map, input);
  const Complex minus_i(0.0, -1.0);
  const auto rhs = [&](double t, const Matrix& rho) -> Matrix {
    const Matrix& g = cache.at(t).generators[static_cast<std::size_t>(j)];
    return minus_i * (g * rho - rho * g);
  };

  EvolutionResult result;
  SpectrumTracker tracker;
  const double trace0 = rho0.trace().real();
  integrate(rho0, grid, rhs, [&](double t, const Matrix& rho) {
    result.times.push_back(t);
    result.operators.push_back(rho);
    const Complex tr = rho.trace();
    result.diagnostics["trace"].push_back(tr.real());
    result.diagnostics["trace_drift"].push_back(std::abs(tr.real() - trace0) +
                                                std::abs(tr.imag()));
    const auto [drift, reliable] = tracker.update(rho);
    result.diagnostics["spectral_drift"].push_back(drift);
    result.diagnostics["eigen_pairing_reliable"].push_back(reliable ? 1.0 : 0.0);
  });
  return result;
}

EvolutionResult integrate_metric(const FactorizedDysonMap& map, const TimeGrid& grid) {
  const Matrix theta0 = map.metric(0, grid.start);
  const Complex minus_i(0.0, -1.0);
  const auto rhs = [&](double t, const Matrix& theta) -> Matrix {
    const Matrix sigma = composite_coriolis_chain(map, t)[0];
    return minus_i * (theta * sigma - sigma.adjoint() * theta);
  };

  EvolutionResult result;
  integrate(theta0, grid, rhs, [&](double t, const Matrix& theta) {
    result.times.push_back(t);
    result.operators.push_back(theta);
    result.diagnostics["metric_direct_residual"].push_back(
        (theta - map.metric(0, t)).norm());
    result.diagnostics["hermiticity_residual"].push_back(
        (theta - theta.adjoint()).norm());
  });
  return result;
}

Matrix density_from_ensemble(const Ensemble& ensemble) {
  ensemble.validate();
  const Eigen::Index d = ensemble.states.front().ket.size();
  Matrix rho = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < ensemble.states.size(); ++k) {
    const StatePair& s = ensemble.states[k];
    const Complex norm = physical_overlap(s);
    if (std::abs(norm) < 1e-14)
      throw ZeroNorm("ensemble state " + std::to_string(k) + " has zero physical norm");
    rho += (ensemble.weights[k] / norm) * (s.ket * s.conjugate.adjoint());
  }
  return rho;
}

}  // namespace corforge
