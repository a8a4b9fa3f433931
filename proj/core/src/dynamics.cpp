#include "staqst/dynamics.hpp"

#include <cmath>
#include <string>

#include "staqst/error.hpp"

namespace staqst {

namespace {

constexpr Complex kI{0.0, 1.0};

std::vector<double> sample_times(double t0, double t1, int samples) {
  std::vector<double> times(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    times[static_cast<std::size_t>(k)] =
        (k == samples - 1) ? t1 : t0 + (t1 - t0) * static_cast<double>(k) / (samples - 1);
  }
  return times;
}

/// Fixed steps per sample interval so that samples fall on step boundaries.
long steps_per_interval(double t0, double t1, const PropagatorConfig& cfg) {
  const double intervals = cfg.samples - 1;
  const double total = std::ceil((t1 - t0) / cfg.step - 1e-9);
  return std::max(1L, static_cast<long>(std::ceil(total / intervals - 1e-9)));
}

void check_interval(double t0, double t1) {
  if (!(t1 > t0) || !std::isfinite(t0) || !std::isfinite(t1)) {
    throw DomainError("propagation needs finite t1 > t0");
  }
}

/// Nonzero entries of a collapse operator.
struct JumpKernel {
  struct Entry {
    Eigen::Index row;
    Eigen::Index col;
    Complex value;
  };
  std::vector<Entry> entries;
  double rate = 0.0;
};

class LindbladRhs {
 public:
  LindbladRhs(const HamiltonianFn& hamiltonian, std::span<const CollapseOperator> collapse,
              Eigen::Index dim)
      : hamiltonian_(&hamiltonian) {
    anti_ = Matrix::Zero(dim, dim);
    for (const auto& c : collapse) {
      if (c.rate < 0.0) throw DomainError("collapse rate must be >= 0 (" + c.label + ")");
      if (c.op.rows() != dim || c.op.cols() != dim) {
        throw DomainError("collapse operator " + c.label + " has the wrong dimension");
      }
      if (c.rate == 0.0) continue;
      anti_ += (-0.5 * c.rate) * kI * (c.op.adjoint() * c.op);
      JumpKernel k;
      k.rate = c.rate;
      for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) {
          if (c.op(i, j) != 0.0) k.entries.push_back({i, j, c.op(i, j)});
        }
      }
      jumps_.push_back(std::move(k));
    }
  }

  void operator()(double t, const Matrix& rho, Matrix& drho) {
    h_eff_ = (*hamiltonian_)(t);
    h_eff_ += anti_;
    prod_.noalias() = h_eff_ * rho;
    drho.noalias() = -kI * prod_;
    prod_.noalias() = rho * h_eff_.adjoint();
    drho.noalias() += kI * prod_;
    for (const auto& k : jumps_) {
      for (const auto& a : k.entries) {
        for (const auto& b : k.entries) {
          drho(a.row, b.row) += k.rate * a.value * rho(a.col, b.col) * std::conj(b.value);
        }
      }
    }
  }

 private:
  const HamiltonianFn* hamiltonian_;
  Matrix anti_;
  std::vector<JumpKernel> jumps_;
  Matrix h_eff_;
  Matrix prod_;
};

struct SchrodingerRhs {
  const HamiltonianFn* hamiltonian;
  void operator()(double t, const Vector& psi, Vector& dpsi) const {
    dpsi.noalias() = -kI * ((*hamiltonian)(t) * psi);
  }
};

template <class State, class Rhs, class OnSample>
IntegrationStats integrate(Rhs rhs, State y, const std::vector<double>& times,
                           const PropagatorConfig& cfg, OnSample on_sample) {
  on_sample(0, y);
  if (cfg.method == IntegratorMethod::rk4) {
    const long per = steps_per_interval(times.front(), times.back(), cfg);
    Rk4Stepper<State, Rhs> stepper(std::move(rhs));
    IntegrationStats stats;
    for (std::size_t k = 1; k < times.size(); ++k) {
      const double a = times[k - 1];
      const double h = (times[k] - a) / static_cast<double>(per);
      for (long s = 0; s < per; ++s) stepper.step(a + static_cast<double>(s) * h, h, y);
      stats.accepted += per;
      on_sample(k, y);
    }
    return stats;
  }
  DormandPrince<State, Rhs> stepper(std::move(rhs), cfg.tolerance);
  for (std::size_t k = 1; k < times.size(); ++k) {
    stepper.advance(times[k - 1], times[k], y);
    on_sample(k, y);
  }
  return stepper.stats();
}

}  // namespace

HamiltonianFn driven_hamiltonian(const HamiltonianTerms& terms, const PulseSet& pulses) {
  if (terms.basis().num_atoms() != 2) {
    throw DomainError("pulse sets drive exactly two atoms");
  }
  return [terms, pulses](double t) {
    const auto controls = pulses(t).atoms();
    return terms.build(controls);
  };
}

StateVector::StateVector(Basis basis, Vector amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_.dimension()) {
    throw DomainError("state vector dimension does not match basis");
  }
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-9) {
    throw DomainError("state vector is not normalized (norm = " +
                      std::to_string(amplitudes_.norm()) + ")");
  }
}

StateVector StateVector::basis_state(const Basis& basis, const BasisState& state) {
  return StateVector(basis, basis.ket(state));
}

DensityMatrixState::DensityMatrixState(Basis basis, Matrix rho)
    : basis_(std::move(basis)), rho_(std::move(rho)) {
  const auto dim = static_cast<Eigen::Index>(basis_.dimension());
  if (rho_.rows() != dim || rho_.cols() != dim) {
    throw DomainError("density matrix dimension does not match basis");
  }
  if (std::abs(rho_.trace() - 1.0) > 1e-7) throw DomainError("density matrix trace != 1");
  if (max_abs(rho_ - rho_.adjoint()) > 1e-9) throw DomainError("density matrix is not Hermitian");
  const Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-7) {
    throw DomainError("density matrix has a negative eigenvalue");
  }
}

DensityMatrixState DensityMatrixState::pure(const StateVector& psi) {
  return DensityMatrixState(psi.basis(), psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrixState DensityMatrixState::maximally_mixed(const Basis& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  return DensityMatrixState(basis, Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

StateTrajectory propagate_schrodinger(const HamiltonianFn& hamiltonian, const StateVector& psi0,
                                      double t0, double t1, const PropagatorConfig& cfg) {
  cfg.validate();
  check_interval(t0, t1);
  StateTrajectory traj{psi0.basis(), sample_times(t0, t1, cfg.samples), {}, {}};
  traj.meta.method = std::string(to_string(cfg.method));
  traj.states.reserve(traj.times.size());

  const auto stats = integrate<Vector>(
      SchrodingerRhs{&hamiltonian}, psi0.amplitudes(), traj.times, cfg,
      [&](std::size_t k, const Vector& psi) {
        const double drift = std::abs(psi.norm() - 1.0);
        traj.meta.max_norm_drift = std::max(traj.meta.max_norm_drift, drift);
        if (drift > 1e-6) {
          throw NumericalError("norm drift " + std::to_string(drift) + " at t = " +
                               std::to_string(traj.times[k]) +
                               "; reduce the step or tighten the tolerance");
        }
        traj.states.push_back(psi);
      });
  traj.meta.steps_accepted = stats.accepted;
  traj.meta.steps_rejected = stats.rejected;
  return traj;
}

DensityTrajectory propagate_lindblad(const HamiltonianFn& hamiltonian,
                                     std::span<const CollapseOperator> collapse,
                                     const DensityMatrixState& rho0, double t0, double t1,
                                     const PropagatorConfig& cfg) {
  cfg.validate();
  check_interval(t0, t1);
  const auto dim = static_cast<Eigen::Index>(rho0.basis().dimension());
  DensityTrajectory traj{rho0.basis(), sample_times(t0, t1, cfg.samples), {}, {}};
  traj.meta.method = std::string(to_string(cfg.method));
  traj.meta.min_eigenvalue = 1.0;
  traj.states.reserve(traj.times.size());

  // Samples are symmetrized in place, so the integrator restarts from the
  // symmetrized state on the next interval.
  Matrix rho = rho0.matrix();
  LindbladRhs rhs(hamiltonian, collapse, dim);
  auto on_sample = [&](std::size_t k, Matrix& r) {
    const double herm = max_abs(r - r.adjoint());
    traj.meta.max_hermiticity_deviation = std::max(traj.meta.max_hermiticity_deviation, herm);
    r = 0.5 * (r + r.adjoint()).eval();
    const double drift = std::abs(r.trace().real() - 1.0);
    traj.meta.max_norm_drift = std::max(traj.meta.max_norm_drift, drift);
    if (drift > 1e-5) {
      throw NumericalError("trace drift " + std::to_string(drift) + " at t = " +
                           std::to_string(traj.times[k]) + "; reduce the step");
    }
    const Eigen::SelfAdjointEigenSolver<Matrix> es(r, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    traj.meta.min_eigenvalue = std::min(traj.meta.min_eigenvalue, lo);
    if (lo < -1e-5) {
      throw NumericalError("density matrix lost positivity (eigenvalue " + std::to_string(lo) +
                           ") at t = " + std::to_string(traj.times[k]));
    }
    traj.states.push_back(r);
  };

  // Sample-wise integration so every sample can be symmetrized before the
  // next interval starts.
  on_sample(0, rho);
  IntegrationStats stats;
  if (cfg.method == IntegratorMethod::rk4) {
    const long per = steps_per_interval(t0, t1, cfg);
    Rk4Stepper<Matrix, LindbladRhs&> stepper(rhs);
    for (std::size_t k = 1; k < traj.times.size(); ++k) {
      const double a = traj.times[k - 1];
      const double h = (traj.times[k] - a) / static_cast<double>(per);
      for (long s = 0; s < per; ++s) stepper.step(a + static_cast<double>(s) * h, h, rho);
      stats.accepted += per;
      on_sample(k, rho);
    }
  } else {
    DormandPrince<Matrix, LindbladRhs&> stepper(rhs, cfg.tolerance);
    for (std::size_t k = 1; k < traj.times.size(); ++k) {
      stepper.advance(traj.times[k - 1], traj.times[k], rho);
      on_sample(k, rho);
    }
    stats = stepper.stats();
  }
  traj.meta.steps_accepted = stats.accepted;
  traj.meta.steps_rejected = stats.rejected;
  return traj;
}

namespace {

template <class PopulationOf>
ObservableReport make_report(const Basis& basis, std::span<const BasisState> tracked,
                             const BasisState& target, const std::optional<BasisState>& sink,
                             PopulationOf population_of) {
  const std::size_t target_index = basis.index(target);
  ObservableReport r;
  double tracked_sum = 0.0;
  for (const auto& st : tracked) {
    const double p = population_of(basis.index(st));
    r.populations.push_back(p);
    tracked_sum += p;
  }
  for (std::size_t i = 0; i < basis.dimension(); ++i) r.total += population_of(i);
  r.fidelity = population_of(target_index);
  if (sink) r.sink_population = population_of(basis.index(*sink));
  r.leakage = r.total - tracked_sum - r.sink_population;
  return r;
}

}  // namespace

ObservableReport observables(const Vector& psi, const Basis& basis,
                             std::span<const BasisState> tracked, const BasisState& target,
                             const std::optional<BasisState>& sink) {
  if (static_cast<std::size_t>(psi.size()) != basis.dimension()) {
    throw DomainError("state dimension does not match basis");
  }
  return make_report(basis, tracked, target, sink, [&](std::size_t i) {
    return std::norm(psi(static_cast<Eigen::Index>(i)));
  });
}

ObservableReport observables(const Matrix& rho, const Basis& basis,
                             std::span<const BasisState> tracked, const BasisState& target,
                             const std::optional<BasisState>& sink) {
  if (static_cast<std::size_t>(rho.rows()) != basis.dimension()) {
    throw DomainError("density matrix dimension does not match basis");
  }
  return make_report(basis, tracked, target, sink, [&](std::size_t i) {
    const auto k = static_cast<Eigen::Index>(i);
    return rho(k, k).real();
  });
}

double qst_superposition(Complex x, Complex y, const PulseSet& pulses,
                         const DecoherenceParams& dec, const PropagatorConfig& cfg) {
  if (std::abs(std::norm(x) + std::norm(y) - 1.0) > 1e-9) {
    throw DomainError("coded amplitudes must satisfy |x|^2 + |y|^2 = 1");
  }
  const Basis basis(2, 1);
  const Vector psi0 = x * basis.ket("fs,0") + y * basis.ket("ss,0");
  const Vector target = x * basis.ket("sf,0") + y * basis.ket("ss,0");
  const HamiltonianTerms terms(basis);
  const auto h = driven_hamiltonian(terms, pulses);
  const auto ops = collapse_operators(basis, dec);
  const auto traj = propagate_lindblad(h, ops, DensityMatrixState::pure(StateVector(basis, psi0)),
                                       pulses.t_start(), pulses.t_end(), cfg);
  return target.dot(traj.final_state() * target).real();
}

}  // namespace staqst
