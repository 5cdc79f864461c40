#include "corforge/linop.hpp"

#include <cmath>

#include "corforge/errors.hpp"

namespace corforge {

namespace {

// Pade coefficients and 1-norm thresholds from the standard double-precision
// scaling-and-squaring tables.
void pade_3(const Matrix& a, const Matrix& a2, Matrix& u, Matrix& v) {
  static const double b[] = {120., 60., 12., 1.};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  u = a * (b[3] * a2 + b[1] * id);
  v = b[2] * a2 + b[0] * id;
}

void pade_5(const Matrix& a, const Matrix& a2, Matrix& u, Matrix& v) {
  static const double b[] = {30240., 15120., 3360., 420., 30., 1.};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix a4 = a2 * a2;
  u = a * (b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade_7(const Matrix& a, const Matrix& a2, Matrix& u, Matrix& v) {
  static const double b[] = {17297280., 8648640., 1995840., 277200.,
                             25200.,    1512.,    56.,      1.};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  u = a * (b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade_9(const Matrix& a, const Matrix& a2, Matrix& u, Matrix& v) {
  static const double b[] = {17643225600., 8821612800., 2075673600., 302702400.,
                             30270240.,    2162160.,    110880.,     3960.,
                             90.,          1.};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  const Matrix a8 = a6 * a2;
  u = a * (b[9] * a8 + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  v = b[8] * a8 + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

void pade_13(const Matrix& a, const Matrix& a2, Matrix& u, Matrix& v) {
  static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                             1187353796428800.,  129060195264000.,   10559470521600.,
                             670442572800.,      33522128640.,       1323241920.,
                             40840800.,          960960.,            16380.,
                             182.,               1.};
  const Matrix id = Matrix::Identity(a.rows(), a.cols());
  const Matrix a4 = a2 * a2;
  const Matrix a6 = a4 * a2;
  u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
           b[3] * a2 + b[1] * id);
  v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
      b[2] * a2 + b[0] * id;
}

}  // namespace

Matrix matrix_exp(const Matrix& a) {
  if (!a.allFinite()) throw Overflow("matrix_exp: non-finite input");
  const auto d = a.rows();
  if (d == 0) return a;

  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
  int squarings = 0;
  Matrix scaled = a;
  Matrix u, v;

  if (norm <= 1.495585217958292e-2) {
    const Matrix a2 = scaled * scaled;
    pade_3(scaled, a2, u, v);
  } else if (norm <= 2.539398330063230e-1) {
    const Matrix a2 = scaled * scaled;
    pade_5(scaled, a2, u, v);
  } else if (norm <= 9.504178996162932e-1) {
    const Matrix a2 = scaled * scaled;
    pade_7(scaled, a2, u, v);
  } else if (norm <= 2.097847961257068e0) {
    const Matrix a2 = scaled * scaled;
    pade_9(scaled, a2, u, v);
  } else {
    const double theta_13 = 5.371920351148152;
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta_13))));
    if (squarings > 1024) throw Overflow("matrix_exp: norm too large to scale");
    scaled = a / std::pow(2.0, squarings);
    const Matrix a2 = scaled * scaled;
    pade_13(scaled, a2, u, v);
  }

  Matrix num = v + u;
  Matrix den = v - u;
  Eigen::PartialPivLU<Matrix> lu(den);
  Matrix result = lu.solve(num);
  for (int k = 0; k < squarings; ++k) result = result * result;

  if (!result.allFinite()) throw Overflow("matrix_exp: result overflowed");
  return result;
}

Matrix invert(const Matrix& a, const std::string& what) {
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible())
    throw SingularFactor("singular operator: " + what);
  return lu.inverse();
}

OscOperators build_osc_operators(int dimension) {
  if (dimension < 2) throw ValidationError("oscillator basis needs dimension >= 2");
  Matrix lowering = Matrix::Zero(dimension, dimension);
  for (int n = 1; n < dimension; ++n)
    lowering(n - 1, n) = Complex(std::sqrt(static_cast<double>(n)), 0.0);
  const Matrix raising = lowering.adjoint();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  OscOperators ops;
  ops.x = inv_sqrt2 * (lowering + raising);
  ops.p = Complex(0.0, 1.0) * inv_sqrt2 * (raising - lowering);
  return ops;
}

OperatorDiagnostics diagnostics(const Matrix& a) {
  OperatorDiagnostics out;
  out.hermiticity_residual = (a - a.adjoint()).norm();
  out.hermitian = out.hermiticity_residual <= 1e-10;
  const Matrix herm_part = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm_part, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw EigensolverFailure("diagnostics: Hermitian eigensolver failed");
  out.min_eigenvalue = solver.eigenvalues().minCoeff();
  out.positive_definite = out.hermitian && out.min_eigenvalue > 0.0;
  return out;
}

SeparableFactor::SeparableFactor(std::string label, Matrix generator,
                                 CoefficientFn coefficient)
    : Factor(std::move(label)),
      generator_(std::move(generator)),
      coefficient_(std::move(coefficient)) {
  if (generator_.rows() != generator_.cols())
    throw ValidationError("factor generator must be square: " + label_);
}

Matrix SeparableFactor::omega(double t) const {
  return matrix_exp(coefficient_.value(t) * generator_);
}

FactorSample SeparableFactor::sample(double t) const {
  FactorSample s;
  const double fdot = coefficient_.derivative(t);
  s.omega = omega(t);
  s.omega_dot = fdot * generator_ * s.omega;
  s.coriolis = Complex(0.0, 1.0) * fdot * generator_;
  return s;
}

GeneralFactor::GeneralFactor(std::string label, Sampler sampler, double fd_step)
    : Factor(std::move(label)), sampler_(std::move(sampler)), fd_step_(fd_step) {
  if (fd_step_ <= 0.0) throw ValidationError("finite-difference step must be > 0");
}

Matrix GeneralFactor::omega(double t) const {
  Matrix m = sampler_(t);
  if (!m.allFinite())
    throw SingularFactor("factor sampler returned non-finite entries: " + label_);
  return m;
}

FactorSample GeneralFactor::sample(double t) const {
  FactorSample s;
  s.omega = omega(t);
  s.omega_dot = finite_diff_derivative(*this, t, fd_step_);
  s.coriolis = Complex(0.0, 1.0) * invert(s.omega, label_) * s.omega_dot;
  return s;
}

Matrix finite_diff_derivative(const Factor& factor, double t, double h) {
  if (h <= 0.0) throw ValidationError("finite-difference step must be > 0");
  return (factor.omega(t + h) - factor.omega(t - h)) / (2.0 * h);
}

}  // namespace corforge
