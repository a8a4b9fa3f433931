#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "staqst/hilbert.hpp"
#include "staqst/integrators.hpp"
#include "staqst/pulses.hpp"

namespace staqst {

/// H(t) over a fixed basis, rad/us.
using HamiltonianFn = std::function<Matrix(double)>;

/// Binds a pulse schedule to the precomputed Hamiltonian pieces of a
/// two-atom basis.
HamiltonianFn driven_hamiltonian(const HamiltonianTerms& terms, const PulseSet& pulses);

/// Normalized pure state over a basis.
class StateVector {
 public:
  /// Throws DomainError unless | ||psi|| - 1 | <= 1e-9.
  StateVector(Basis basis, Vector amplitudes);

  static StateVector basis_state(const Basis& basis, const BasisState& state);

  const Basis& basis() const { return basis_; }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  Basis basis_;
  Vector amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite matrix over a basis.
class DensityMatrixState {
 public:
  /// Throws DomainError when trace, Hermiticity or positivity is violated
  /// beyond 1e-7 / 1e-9 / -1e-7.
  DensityMatrixState(Basis basis, Matrix rho);

  static DensityMatrixState pure(const StateVector& psi);
  static DensityMatrixState maximally_mixed(const Basis& basis);

  const Basis& basis() const { return basis_; }
  const Matrix& matrix() const { return rho_; }

 private:
  Basis basis_;
  Matrix rho_;
};

struct TrajectoryMeta {
  std::string method;
  long steps_accepted = 0;
  long steps_rejected = 0;
  double max_norm_drift = 0.0;          ///< | ||psi|| - 1 | or | tr rho - 1 |
  double max_hermiticity_deviation = 0.0;  ///< density matrices only
  double min_eigenvalue = 0.0;             ///< density matrices only
};

template <class Sample>
struct Trajectory {
  Basis basis;
  std::vector<double> times;
  std::vector<Sample> states;
  TrajectoryMeta meta;

  const Sample& final_state() const { return states.back(); }
};

using StateTrajectory = Trajectory<Vector>;
using DensityTrajectory = Trajectory<Matrix>;

/// Solves i d/dt psi = H(t) psi on [t0, t1]. No renormalization is applied;
/// norm drift above 1e-6 raises NumericalError.
StateTrajectory propagate_schrodinger(const HamiltonianFn& hamiltonian, const StateVector& psi0,
                                      double t0, double t1, const PropagatorConfig& cfg);

/// Solves the Lindblad master equation
///   d rho/dt = -i[H, rho] + sum_k r_k (L_k rho L_k^+ - {L_k^+ L_k, rho}/2)
/// on [t0, t1]. Each sample is symmetrized (deviation recorded). Trace drift
/// above 1e-5 or an eigenvalue below -1e-5 raises NumericalError.
DensityTrajectory propagate_lindblad(const HamiltonianFn& hamiltonian,
                                     std::span<const CollapseOperator> collapse,
                                     const DensityMatrixState& rho0, double t0, double t1,
                                     const PropagatorConfig& cfg);

struct ObservableReport {
  std::vector<double> populations;  ///< one per tracked state, in order
  double fidelity = 0.0;
  double sink_population = 0.0;     ///< population of the optional sink state
  double leakage = 0.0;             ///< total - sum(tracked) - sink
  double total = 0.0;               ///< sum of all basis populations
};

/// Populations of the tracked states and fidelity against `target`. When a
/// sink state is given (|ss,0> with decoherence on) it is excluded from the
/// leakage.
ObservableReport observables(const Vector& psi, const Basis& basis,
                             std::span<const BasisState> tracked, const BasisState& target,
                             const std::optional<BasisState>& sink = std::nullopt);
ObservableReport observables(const Matrix& rho, const Basis& basis,
                             std::span<const BasisState> tracked, const BasisState& target,
                             const std::optional<BasisState>& sink = std::nullopt);

/// Transfers x|f>_1 + y|s>_1 (atom 2 in |s>, cavity empty) to atom 2 and
/// returns the fidelity with |s>_1 (x|f>_2 + y|s>_2)|0>.
double qst_superposition(Complex x, Complex y, const PulseSet& pulses,
                         const DecoherenceParams& dec, const PropagatorConfig& cfg);

}  // namespace staqst
