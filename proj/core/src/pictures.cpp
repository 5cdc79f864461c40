#include "corforge/pictures.hpp"

#include "corforge/errors.hpp"

namespace corforge {

FactorizedDysonMap::FactorizedDysonMap(
    std::vector<std::shared_ptr<const Factor>> factors)
    : factors_(std::move(factors)) {
  if (factors_.empty())
    throw ValidationError("a factorized Dyson map needs at least one factor");
  for (const auto& f : factors_)
    if (!f) throw ValidationError("null factor in Dyson map");
  dimension_ = static_cast<int>(factors_.front()->omega(0.0).rows());
  for (const auto& f : factors_) {
    const Matrix probe = f->omega(0.0);
    if (probe.rows() != dimension_ || probe.cols() != dimension_)
      throw ValidationError("factor dimensions disagree: " + f->label());
  }
}

const Factor& FactorizedDysonMap::factor(int n) const {
  if (n < 1 || n > size())
    throw ValidationError("factor index out of range: " + std::to_string(n));
  return *factors_[static_cast<std::size_t>(n - 1)];
}

Matrix FactorizedDysonMap::full_product(double t) const {
  return partial_product(0, t);
}

Matrix FactorizedDysonMap::partial_product(int j, double t) const {
  if (j < 0 || j > size())
    throw ValidationError("picture index out of range: " + std::to_string(j));
  Matrix acc = Matrix::Identity(dimension_, dimension_);
  for (int n = size(); n > j; --n) acc = acc * factor(n).omega(t);
  return acc;
}

Matrix FactorizedDysonMap::metric(int j, double t) const {
  const Matrix part = partial_product(j, t);
  return part.adjoint() * part;
}

std::vector<Matrix> composite_coriolis_chain(const FactorizedDysonMap& map,
                                             double t) {
  const int n_factors = map.size();
  const int d = map.dimension();
  std::vector<Matrix> chain(static_cast<std::size_t>(n_factors) + 1);
  chain[static_cast<std::size_t>(n_factors)] = Matrix::Zero(d, d);
  for (int n = n_factors; n >= 1; --n) {
    const FactorSample s = map.factor(n).sample(t);
    const Matrix omega_inv = invert(s.omega, map.factor(n).label());
    chain[static_cast<std::size_t>(n - 1)] =
        s.coriolis + omega_inv * chain[static_cast<std::size_t>(n)] * s.omega;
  }
  return chain;
}

std::vector<Matrix> descend_hamiltonians(const FactorizedDysonMap& map,
                                         const Matrix& h, double t) {
  const int n_factors = map.size();
  std::vector<Matrix> hams(static_cast<std::size_t>(n_factors) + 1);
  hams[static_cast<std::size_t>(n_factors)] = h;
  for (int j = n_factors; j >= 1; --j) {
    const Matrix omega = map.factor(j).omega(t);
    const Matrix omega_inv = invert(omega, map.factor(j).label());
    hams[static_cast<std::size_t>(j - 1)] =
        omega_inv * hams[static_cast<std::size_t>(j)] * omega;
  }
  return hams;
}

PictureFamily PictureFamily::build(const FactorizedDysonMap& map,
                                   const HamiltonianInput& input, double t) {
  PictureFamily fam;
  fam.t = t;
  fam.n_factors = map.size();
  const int n_pictures = fam.n_factors + 1;

  fam.partial_products.resize(static_cast<std::size_t>(n_pictures));
  fam.metrics.resize(static_cast<std::size_t>(n_pictures));
  const int d = map.dimension();
  Matrix acc = Matrix::Identity(d, d);
  fam.partial_products[static_cast<std::size_t>(fam.n_factors)] = acc;
  for (int j = fam.n_factors - 1; j >= 0; --j) {
    acc = acc * map.factor(j + 1).omega(t);
    fam.partial_products[static_cast<std::size_t>(j)] = acc;
  }
  for (int j = 0; j <= fam.n_factors; ++j) {
    const Matrix& part = fam.partial_products[static_cast<std::size_t>(j)];
    fam.metrics[static_cast<std::size_t>(j)] = part.adjoint() * part;
  }

  fam.coriolis = composite_coriolis_chain(map, t);

  if (input.mode == HamiltonianInput::Mode::top_down) {
    fam.hamiltonians = descend_hamiltonians(map, input.op(t), t);
  } else {
    // Bottom-up: the picture-0 generator is given; H_0 = G + Sigma_1, then
    // ascend by similarity. The Hermiticity of H_N is diagnosed downstream.
    const int n_factors = fam.n_factors;
    fam.hamiltonians.resize(static_cast<std::size_t>(n_factors) + 1);
    fam.hamiltonians[0] = input.op(t) + fam.coriolis[0];
    for (int j = 1; j <= n_factors; ++j) {
      const Matrix omega = map.factor(j).omega(t);
      fam.hamiltonians[static_cast<std::size_t>(j)] =
          omega * fam.hamiltonians[static_cast<std::size_t>(j - 1)] *
          invert(omega, map.factor(j).label());
    }
  }

  fam.generators.resize(static_cast<std::size_t>(n_pictures));
  for (int j = 0; j <= fam.n_factors; ++j) {
    fam.generators[static_cast<std::size_t>(j)] =
        fam.hamiltonians[static_cast<std::size_t>(j)] -
        fam.coriolis[static_cast<std::size_t>(j)];
  }
  return fam;
}

Matrix generator_at(const FactorizedDysonMap& map, const HamiltonianInput& input,
                    int j, double t) {
  if (j < 0 || j > map.size())
    throw ValidationError("picture index out of range: " + std::to_string(j));
  return PictureFamily::build(map, input, t)
      .generators[static_cast<std::size_t>(j)];
}

StatePair map_state(const StatePair& state, MapDirection direction,
                    const FactorizedDysonMap& map, double t) {
  StatePair out;
  if (direction == MapDirection::up) {
    if (state.picture < 0 || state.picture >= map.size())
      throw ValidationError("cannot map state above picture N");
    const Matrix omega = map.factor(state.picture + 1).omega(t);
    out.picture = state.picture + 1;
    out.ket = omega * state.ket;
    out.conjugate = invert(omega.adjoint(), map.factor(state.picture + 1).label()) *
                    state.conjugate;
  } else {
    if (state.picture < 1 || state.picture > map.size())
      throw ValidationError("cannot map state below picture 0");
    const Matrix omega = map.factor(state.picture).omega(t);
    out.picture = state.picture - 1;
    out.ket = invert(omega, map.factor(state.picture).label()) * state.ket;
    out.conjugate = omega.adjoint() * state.conjugate;
  }
  return out;
}

Complex physical_overlap(const StatePair& state) {
  return state.conjugate.dot(state.ket);
}

Complex physical_expectation(const StatePair& state, const Matrix& a) {
  const Complex norm = physical_overlap(state);
  if (std::abs(norm) < 1e-14)
    throw ZeroNorm("physical norm vanishes; expectation undefined");
  const Complex raw = state.conjugate.dot(a * state.ket);
  return raw / norm;
}

double quasi_hermiticity_residual(const FactorizedDysonMap& map,
                                  const HamiltonianInput& input, int j, double t) {
  const PictureFamily fam = PictureFamily::build(map, input, t);
  const Matrix& h_j = fam.hamiltonians[static_cast<std::size_t>(j)];
  const Matrix& theta = fam.metrics[static_cast<std::size_t>(j)];
  return (h_j.adjoint() * theta - theta * h_j).norm();
}

}  // namespace corforge
