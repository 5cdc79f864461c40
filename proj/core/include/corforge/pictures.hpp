#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "corforge/linop.hpp"

namespace corforge {

/// Time-dependent operator on the working space.
using TimeOperator = std::function<Matrix(double)>;

/// Factorized Dyson map Omega(t) = Omega_N(t) ... Omega_1(t). Factors are
/// stored first-applied first: factor(1) acts on picture-0 kets, factor(N)
/// is the outermost (the product is written right-to-left).
class FactorizedDysonMap {
 public:
  explicit FactorizedDysonMap(std::vector<std::shared_ptr<const Factor>> factors);

  int size() const { return static_cast<int>(factors_.size()); }  // N
  int dimension() const { return dimension_; }
  const Factor& factor(int n) const;  // n = 1..N

  /// Full product Omega(t) = Omega_N ... Omega_1.
  Matrix full_product(double t) const;

  /// Partial product Omega_[j] = Omega_N ... Omega_{j+1}; identity at j = N,
  /// the full map at j = 0.
  Matrix partial_product(int j, double t) const;

  /// Metric of picture j: Theta^[j] = Omega_[j]^dag Omega_[j].
  Matrix metric(int j, double t) const;

 private:
  std::vector<std::shared_ptr<const Factor>> factors_;
  int dimension_;
};

/// How the dynamics is specified: either the Hermitian Hamiltonian h(t) of
/// the conventional picture (top-down), or the picture-0 generator G(t)
/// (bottom-up), from which h = Omega (G + Sigma_1) Omega^{-1} is derived and
/// its Hermiticity reported rather than assumed.
struct HamiltonianInput {
  enum class Mode { top_down, bottom_up };
  Mode mode = Mode::top_down;
  TimeOperator op;
};

/// Everything the ladder provides at one instant: partial products, metrics,
/// Hamiltonians, composite Coriolis operators and evolution generators for
/// every picture j = 0..N.
struct PictureFamily {
  double t = 0.0;
  int n_factors = 0;                    // N
  std::vector<Matrix> partial_products;  // [j] = Omega_[j],  j = 0..N
  std::vector<Matrix> metrics;           // [j] = Theta^[j]
  std::vector<Matrix> hamiltonians;      // [j] = H_j
  std::vector<Matrix> coriolis;          // [j] = Sigma_{j+1}; coriolis[N] = 0
  std::vector<Matrix> generators;        // [j] = G_j = H_j - Sigma_{j+1}

  static PictureFamily build(const FactorizedDysonMap& map,
                             const HamiltonianInput& input, double t);
};

/// Composite Coriolis recursion at time t. Returns chain[j] = Sigma_{j+1}
/// for j = 0..N (so chain[0] is the full Coriolis operator
/// i Omega^{-1} dOmega/dt and chain[N] = 0):
///   Sigma_n = Sigma_tilde_n + Omega_n^{-1} Sigma_{n+1} Omega_n, n = N..1.
std::vector<Matrix> composite_coriolis_chain(const FactorizedDysonMap& map, double t);

/// Hamiltonian descent H_N = h, H_{j-1} = Omega_j^{-1} H_j Omega_j.
/// Returns [j] = H_j for j = 0..N; all similar, hence isospectral.
std::vector<Matrix> descend_hamiltonians(const FactorizedDysonMap& map,
                                         const Matrix& h, double t);

/// Evolution generator of picture j: G_j = H_j - Sigma_{j+1}; at j = N this
/// is the conventional Schroedinger generator h(t).
Matrix generator_at(const FactorizedDysonMap& map, const HamiltonianInput& input,
                    int j, double t);

/// State of picture j: the ket and its metric-dressed conjugate partner.
/// For a pure state built at t0 the conjugate is Theta^[j](t0) * ket; the
/// pair is then evolved as two independent vectors.
struct StatePair {
  int picture = 0;
  Vector ket;
  Vector conjugate;
};

enum class MapDirection { up, down };

/// Moves a state one rung: up (j -> j+1) applies Omega_{j+1} to the ket and
/// (Omega_{j+1}^dag)^{-1} to the conjugate; down inverts both. Round trips
/// are exact inverses.
StatePair map_state(const StatePair& state, MapDirection direction,
                    const FactorizedDysonMap& map, double t);

/// Physical overlap <<psi|psi>> = conjugate^dag * ket.
Complex physical_overlap(const StatePair& state);

/// <<psi| A |psi>> / <<psi|psi>>; real up to rounding when A is
/// quasi-Hermitian with respect to the picture metric. Throws ZeroNorm when
/// the physical norm is below 1e-14.
Complex physical_expectation(const StatePair& state, const Matrix& a);

/// || H_j^dag Theta^[j] - Theta^[j] H_j ||_F. Vanishes (to rounding) when
/// h(t) is Hermitian; reported as a magnitude, never as an error.
double quasi_hermiticity_residual(const FactorizedDysonMap& map,
                                  const HamiltonianInput& input, int j, double t);

}  // namespace corforge
