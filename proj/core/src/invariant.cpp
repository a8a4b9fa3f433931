#include "staqst/invariant.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "staqst/error.hpp"

namespace staqst {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr std::array<InvariantMode, 3> kModes{InvariantMode::zero, InvariantMode::plus,
                                              InvariantMode::minus};

std::size_t mode_index(InvariantMode m) { return static_cast<std::size_t>(m); }

}  // namespace

AngleSample AuxAngles::at(double t) const {
  return {gamma(t), beta(t), gamma_dot(t), beta_dot(t)};
}

AuxAngles AuxAngles::sta_ansatz(double epsilon, double t_f) {
  if (!(t_f > 0.0)) throw DomainError("t_f must be > 0");
  const double rate = std::numbers::pi / (2.0 * t_f);
  return {[epsilon](double) { return epsilon; }, [rate](double t) { return rate * t; },
          [](double) { return 0.0; }, [rate](double) { return rate; }};
}

AuxAngles AuxAngles::from_functions(std::function<double(double)> gamma,
                                    std::function<double(double)> beta, double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be > 0");
  auto diff = [h](std::function<double(double)> f) {
    return [f = std::move(f), h](double t) { return (f(t + h) - f(t - h)) / (2.0 * h); };
  };
  AuxAngles a;
  a.gamma_dot = diff(gamma);
  a.beta_dot = diff(beta);
  a.gamma = std::move(gamma);
  a.beta = std::move(beta);
  return a;
}

Matrix3 invariant_matrix(double mu, double gamma, double beta) {
  const double cg = std::cos(gamma), sg = std::sin(gamma);
  const double cb = std::cos(beta), sb = std::sin(beta);
  Matrix3 m;
  m << 0.0, cg * sb, -kI * sg,
       cg * sb, 0.0, cg * cb,
       kI * sg, cg * cb, 0.0;
  return mu * m;
}

Matrix3 invariant_matrix(const InvariantSpec& spec, double t) {
  if (!(spec.mu > 0.0)) throw DomainError("invariant scale mu must be > 0");
  return invariant_matrix(spec.mu, spec.angles.gamma(t), spec.angles.beta(t));
}

double mode_eigenvalue(InvariantMode m) {
  switch (m) {
    case InvariantMode::zero: return 0.0;
    case InvariantMode::plus: return 1.0;
    case InvariantMode::minus: return -1.0;
  }
  return 0.0;
}

const Vector3& InvariantEigenstates::operator[](InvariantMode m) const {
  switch (m) {
    case InvariantMode::plus: return plus;
    case InvariantMode::minus: return minus;
    case InvariantMode::zero: break;
  }
  return zero;
}

InvariantEigenstates invariant_eigenstates(double gamma, double beta) {
  const double cg = std::cos(gamma), sg = std::sin(gamma);
  const double cb = std::cos(beta), sb = std::sin(beta);
  const double r = 1.0 / std::sqrt(2.0);
  InvariantEigenstates e;
  e.zero << cg * cb, -kI * sg, -cg * sb;
  e.plus << r * (sg * cb + kI * sb), r * kI * cg, r * (-sg * sb + kI * cb);
  e.minus << r * (sg * cb - kI * sb), r * kI * cg, r * (-sg * sb - kI * cb);
  return e;
}

InvariantEigenstates invariant_eigenstates(const AuxAngles& angles, double t) {
  return invariant_eigenstates(angles.gamma(t), angles.beta(t));
}

InvariantEigenstates invariant_eigenstate_derivatives(const AngleSample& a) {
  const double cg = std::cos(a.gamma), sg = std::sin(a.gamma);
  const double cb = std::cos(a.beta), sb = std::sin(a.beta);
  const double gd = a.gamma_dot, bd = a.beta_dot;
  const double r = 1.0 / std::sqrt(2.0);
  InvariantEigenstates d;
  d.zero << -gd * sg * cb - bd * cg * sb, -kI * gd * cg, gd * sg * sb - bd * cg * cb;
  for (double sign : {1.0, -1.0}) {
    Vector3 v;
    v << r * (gd * cg * cb - bd * sg * sb + sign * kI * bd * cb),
        -r * kI * gd * sg,
        r * (-gd * cg * sb - bd * sg * cb - sign * kI * bd * sb);
    (sign > 0 ? d.plus : d.minus) = v;
  }
  return d;
}

AtomControls inverse_engineer(const AngleSample& a) {
  const double sg = std::sin(a.gamma);
  if (std::abs(sg) < 1e-12 || !std::isfinite(a.gamma)) {
    throw DomainError("inverse engineering is singular at gamma = " + std::to_string(a.gamma) +
                      " (cot(gamma) diverges)");
  }
  const double cot = std::cos(a.gamma) / sg;
  const double cb = std::cos(a.beta), sb = std::sin(a.beta);
  return {a.beta_dot * cot * sb + a.gamma_dot * cb, a.beta_dot * cot * cb - a.gamma_dot * sb};
}

AtomControls inverse_engineer(const AuxAngles& angles, double t) {
  return inverse_engineer(angles.at(t));
}

AuxResidual auxiliary_residual(const AngleSample& a, double omega, double g) {
  const double cb = std::cos(a.beta), sb = std::sin(a.beta);
  return {a.gamma_dot - (omega * cb - g * sb),
          a.beta_dot - std::tan(a.gamma) * (g * cb + omega * sb)};
}

AuxResidual auxiliary_residual(const AuxAngles& angles, double omega, double g, double t) {
  return auxiliary_residual(angles.at(t), omega, g);
}

Matrix3 single_atom_hamiltonian(const AtomControls& c) {
  Matrix3 h;
  h << 0.0, c.omega, 0.0,
       c.omega, 0.0, c.g,
       0.0, c.g, 0.0;
  return h;
}

double invariance_residual(const SingleAtomHamiltonian& hamiltonian, const InvariantSpec& spec,
                           double t, double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be > 0");
  const Matrix3 i_dot = (invariant_matrix(spec, t + h) - invariant_matrix(spec, t - h)) / (2.0 * h);
  const Matrix3 inv = invariant_matrix(spec, t);
  const Matrix3 ham = hamiltonian(t);
  const Matrix3 r = kI * i_dot - (ham * inv - inv * ham);
  return r.cwiseAbs().maxCoeff();
}

double lr_phase(InvariantMode m, const SingleAtomHamiltonian& hamiltonian,
                const AuxAngles& angles, double t_prime, int quad_steps) {
  if (!(t_prime >= 0.0)) throw DomainError("t_prime must be >= 0");
  if (quad_steps < 64) throw DomainError("quad_steps must be >= 64");
  if (t_prime == 0.0) return 0.0;
  const int n = quad_steps + (quad_steps % 2);
  const double dt = t_prime / n;

  auto integrand = [&](double t) {
    const AngleSample a = angles.at(t);
    const Vector3 phi = invariant_eigenstates(a.gamma, a.beta)[m];
    const Vector3 dphi = invariant_eigenstate_derivatives(a)[m];
    const Complex v = kI * phi.dot(dphi) - phi.dot(hamiltonian(t) * phi);
    if (std::abs(v.imag()) > 1e-6) {
      throw NumericalError("Lewis-Riesenfeld phase integrand has imaginary part " +
                           std::to_string(v.imag()) + " at t = " + std::to_string(t));
    }
    return v.real();
  };

  double sum = integrand(0.0) + integrand(t_prime);
  for (int k = 1; k < n; ++k) sum += (k % 2 == 1 ? 4.0 : 2.0) * integrand(k * dt);
  return sum * dt / 3.0;
}

double LRDecomposition::norm_squared() const {
  double s = 0.0;
  for (const auto& c : coefficients) s += std::norm(c);
  return s;
}

LRDecomposition lr_decompose(const Vector3& psi, const AuxAngles& angles, double t) {
  const auto e = invariant_eigenstates(angles, t);
  LRDecomposition d;
  for (InvariantMode m : kModes) d.coefficients[mode_index(m)] = e[m].dot(psi);
  return d;
}

Vector3 lr_reconstruct(const LRDecomposition& decomposition, const std::array<double, 3>& phases,
                       const AuxAngles& angles, double t) {
  const auto e = invariant_eigenstates(angles, t);
  Vector3 psi = Vector3::Zero();
  for (InvariantMode m : kModes) {
    const auto i = mode_index(m);
    psi += decomposition.coefficients[i] * std::exp(kI * phases[i]) * e[m];
  }
  return psi;
}

}  // namespace staqst
