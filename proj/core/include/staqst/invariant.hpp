#pragma once

#include <array>
#include <functional>

#include <Eigen/Dense>

#include "staqst/hilbert.hpp"

namespace staqst {

using Matrix3 = Eigen::Matrix3cd;
using Vector3 = Eigen::Vector3cd;

/// Auxiliary angles evaluated at one instant.
struct AngleSample {
  double gamma = 0.0;      ///< rad
  double beta = 0.0;       ///< rad
  double gamma_dot = 0.0;  ///< rad/us
  double beta_dot = 0.0;   ///< rad/us
};

/// Time-dependent auxiliary angles gamma(t), beta(t) and their derivatives.
struct AuxAngles {
  std::function<double(double)> gamma;
  std::function<double(double)> beta;
  std::function<double(double)> gamma_dot;
  std::function<double(double)> beta_dot;

  AngleSample at(double t) const;

  /// gamma = epsilon, beta = pi t / (2 t_f), with analytic derivatives.
  static AuxAngles sta_ansatz(double epsilon, double t_f);

  /// Arbitrary angle functions; derivatives by central differences of step h.
  static AuxAngles from_functions(std::function<double(double)> gamma,
                                  std::function<double(double)> beta, double h = 1e-5);
};

struct InvariantSpec {
  double mu = 1.0;  ///< rad/us, arbitrary scale of the invariant
  AuxAngles angles;
};

/// Invariant over the single-atom sector {|f,0>, |e,0>, |s,1>}:
///
///        [ 0            cg sb     -i sg  ]
///   mu * [ cg sb        0          cg cb ]
///        [ i sg         cg cb      0     ]
///
/// with cg = cos(gamma), sb = sin(beta) and so on. Spectrum {-mu, 0, +mu}.
Matrix3 invariant_matrix(double mu, double gamma, double beta);
Matrix3 invariant_matrix(const InvariantSpec& spec, double t);

enum class InvariantMode { zero, plus, minus };

/// Eigenvalue of the mode in units of mu.
double mode_eigenvalue(InvariantMode m);

struct InvariantEigenstates {
  Vector3 zero;
  Vector3 plus;
  Vector3 minus;

  const Vector3& operator[](InvariantMode m) const;
};

/// Closed-form eigenvectors, used verbatim (fixed gauge).
InvariantEigenstates invariant_eigenstates(double gamma, double beta);
InvariantEigenstates invariant_eigenstates(const AuxAngles& angles, double t);

/// Time derivatives of the closed-form eigenvectors by the chain rule.
InvariantEigenstates invariant_eigenstate_derivatives(const AngleSample& a);

/// Controls that make the invariant exact for the given angles:
///   Omega = beta_dot cot(gamma) sin(beta) + gamma_dot cos(beta)
///   g     = beta_dot cot(gamma) cos(beta) - gamma_dot sin(beta)
/// Throws DomainError when sin(gamma) vanishes.
AtomControls inverse_engineer(const AngleSample& a);
AtomControls inverse_engineer(const AuxAngles& angles, double t);

struct AuxResidual {
  double r_gamma = 0.0;
  double r_beta = 0.0;
};

/// Residuals of the auxiliary equations
///   gamma_dot = Omega cos(beta) - g sin(beta)
///   beta_dot  = tan(gamma) (g cos(beta) + Omega sin(beta)).
AuxResidual auxiliary_residual(const AngleSample& a, double omega, double g);
AuxResidual auxiliary_residual(const AuxAngles& angles, double omega, double g, double t);

using SingleAtomHamiltonian = std::function<Matrix3(double)>;

/// 3x3 Hamiltonian of one atom and the cavity in {|f,0>, |e,0>, |s,1>}.
Matrix3 single_atom_hamiltonian(const AtomControls& c);

/// max-abs of i dI/dt - [H, I] at t, with dI/dt by central difference.
double invariance_residual(const SingleAtomHamiltonian& hamiltonian, const InvariantSpec& spec,
                           double t, double h = 1e-5);

/// Lewis-Riesenfeld phase of mode m accumulated over [0, t_prime]:
///   alpha_m = int_0^t' <Phi_m| (i d/dt - H) |Phi_m> dt
/// by composite Simpson quadrature. Throws NumericalError if the integrand
/// carries an imaginary part above 1e-6.
double lr_phase(InvariantMode m, const SingleAtomHamiltonian& hamiltonian,
                const AuxAngles& angles, double t_prime, int quad_steps = 256);

/// Expansion of a state in the invariant eigenbasis at time t.
struct LRDecomposition {
  std::array<Complex, 3> coefficients{};  ///< indexed zero, plus, minus

  double norm_squared() const;
};

LRDecomposition lr_decompose(const Vector3& psi, const AuxAngles& angles, double t);

/// psi(t) = sum_m C_m exp(i alpha_m) Phi_m(t).
Vector3 lr_reconstruct(const LRDecomposition& decomposition, const std::array<double, 3>& phases,
                       const AuxAngles& angles, double t);

}  // namespace staqst
