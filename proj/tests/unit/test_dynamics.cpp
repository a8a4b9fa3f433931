#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "staqst/dynamics.hpp"
#include "staqst/error.hpp"
#include "staqst/experiments.hpp"

using namespace staqst;

namespace {

Matrix expm_hermitian(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Vector phases = (Complex(0.0, -t) * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

const Basis kBasis(2, 1);

Complex transfer_amplitude(const PulseSet& pulses) {
  const HamiltonianTerms terms(kBasis);
  const auto traj = propagate_schrodinger(driven_hamiltonian(terms, pulses),
                                          StateVector::basis_state(kBasis, BasisState::parse("fs,0")),
                                          pulses.t_start(), pulses.t_end(),
                                          PropagatorConfig::adaptive(1e-10, 2));
  return traj.final_state()(kBasis.index("sf,0"));
}

}  // namespace

TEST(Schrodinger, ConstantHamiltonianMatchesExponential) {
  const std::array<AtomControls, 2> c{{{3.0, 5.0}, {4.0, 2.0}}};
  const Matrix h = build_hamiltonian(kBasis, c);
  const HamiltonianFn fn = [&h](double) { return h; };
  const auto psi0 = StateVector::basis_state(kBasis, BasisState::parse("fs,0"));
  const auto traj = propagate_schrodinger(fn, psi0, 0.0, 0.8, PropagatorConfig::adaptive());
  ASSERT_EQ(traj.times.size(), 501u);
  for (std::size_t s : {100u, 250u, 500u}) {
    const Vector exact = expm_hermitian(h, traj.times[s]) * psi0.amplitudes();
    EXPECT_LT((traj.states[s] - exact).cwiseAbs().maxCoeff(), 1e-8);
  }
  EXPECT_LE(traj.meta.max_norm_drift, 1e-7);

  const auto rk = propagate_schrodinger(fn, psi0, 0.0, 0.8, PropagatorConfig::fixed(1e-4, 11));
  EXPECT_LT((rk.final_state() - expm_hermitian(h, 0.8) * psi0.amplitudes()).cwiseAbs().maxCoeff(),
            1e-8);
}

TEST(Schrodinger, RejectsBadInput) {
  Vector v = Vector::Zero(18);
  v(0) = 2.0;
  EXPECT_THROW(StateVector(kBasis, v), DomainError);
  EXPECT_THROW(StateVector(kBasis, Vector::Zero(5)), DomainError);
  EXPECT_THROW(PropagatorConfig::fixed(-1.0).validate(), DomainError);
  EXPECT_THROW(PropagatorConfig::adaptive(1e-10, 1).validate(), DomainError);
}

TEST(Schrodinger, StaysInTransferChain) {
  const auto run = run_populations(PopulationOptions{});
  for (const auto& r : run.reports) EXPECT_LE(std::abs(r.leakage), 1e-10);
  EXPECT_LE(run.meta.max_norm_drift, 1e-7);
  EXPECT_GE(run.final_report().fidelity, 0.995);
}

TEST(Schrodinger, LargerPhotonCutoffAgrees) {
  const auto pulses = PulseSet::sta_sinusoidal(StaParams{});
  const Basis big(2, 2);
  const HamiltonianTerms terms(big);
  const auto traj = propagate_schrodinger(driven_hamiltonian(terms, pulses),
                                          StateVector::basis_state(big, BasisState::parse("fs,0")),
                                          0.0, 0.5, PropagatorConfig::adaptive(1e-10, 2));
  const double f2 = std::norm(traj.final_state()(big.index("sf,0")));
  EXPECT_NEAR(f2, std::norm(transfer_amplitude(pulses)), 1e-8);
}

TEST(DensityMatrix, Validation) {
  Matrix rho = Matrix::Identity(18, 18);
  EXPECT_THROW(DensityMatrixState(kBasis, rho), DomainError);
  Matrix neg = Matrix::Zero(18, 18);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrixState(kBasis, neg), DomainError);
  Matrix nonherm = Matrix::Zero(18, 18);
  nonherm(0, 0) = 1.0;
  nonherm(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrixState(kBasis, nonherm), DomainError);
  EXPECT_NO_THROW(DensityMatrixState::maximally_mixed(kBasis));
}

TEST(Lindblad, CavityDecayOracle) {
  const double kappa = 3.0;
  const HamiltonianFn zero = [](double) { return Matrix::Zero(18, 18); };
  const auto ops = collapse_operators(kBasis, {kappa, 0.0});
  const auto rho0 = DensityMatrixState::pure(StateVector::basis_state(kBasis, BasisState::parse("ss,1")));
  const auto traj = propagate_lindblad(zero, ops, rho0, 0.0, 1.0, PropagatorConfig::fixed(1.0 / 4000, 21));
  const auto i0 = static_cast<Eigen::Index>(kBasis.index("ss,0"));
  const auto i1 = static_cast<Eigen::Index>(kBasis.index("ss,1"));
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    const double t = traj.times[s];
    EXPECT_NEAR(traj.states[s](i0, i0).real(), 1.0 - std::exp(-kappa * t), 1e-6);
    EXPECT_NEAR(traj.states[s](i1, i1).real(), std::exp(-kappa * t), 1e-6);
  }
  EXPECT_LE(traj.meta.max_norm_drift, 1e-6);
}

TEST(Lindblad, SpontaneousEmissionBranches) {
  const double gamma = 2.0;
  const HamiltonianFn zero = [](double) { return Matrix::Zero(18, 18); };
  const auto ops = collapse_operators(kBasis, {0.0, gamma});
  const auto rho0 = DensityMatrixState::pure(StateVector::basis_state(kBasis, BasisState::parse("es,0")));
  const auto traj = propagate_lindblad(zero, ops, rho0, 0.0, 0.5, PropagatorConfig::fixed(0.5 / 4000, 2));
  const auto& rho = traj.final_state();
  const double decayed = 1.0 - std::exp(-gamma * 0.5);
  const auto at = [&](const char* l) {
    const auto i = static_cast<Eigen::Index>(kBasis.index(l));
    return rho(i, i).real();
  };
  EXPECT_NEAR(at("ss,0"), decayed / 2, 1e-8);
  EXPECT_NEAR(at("fs,0"), decayed / 2, 1e-8);
  EXPECT_NEAR(at("es,0"), 1.0 - decayed, 1e-8);
}

TEST(Lindblad, ZeroRatesReproduceSchrodinger) {
  PopulationOptions closed;
  closed.family = PulseFamily::sta_gaussian;
  closed.samples = 51;
  PopulationOptions open = closed;
  open.dec = {1e-300, 0.0};  // forces the density-matrix path at negligible rate
  ASSERT_FALSE(open.dec.closed());
  const auto a = run_populations(closed);
  const auto b = run_populations(open);
  ASSERT_EQ(a.reports.size(), b.reports.size());
  for (std::size_t s = 0; s < a.reports.size(); ++s) {
    for (std::size_t k = 0; k < 5; ++k) {
      EXPECT_NEAR(a.reports[s].populations[k], b.reports[s].populations[k], 1e-6);
    }
  }
  EXPECT_LE(b.meta.max_norm_drift, 1e-6);
  EXPECT_GE(b.meta.min_eigenvalue, -1e-7);
}

TEST(Lindblad, StepHalvingConverges) {
  const auto pulses = PulseSet::sta_gaussian(StaParams{}, GaussianParams{});
  const DecoherenceParams dec{0.05 * pulses.coupling_scale(), 0.05 * pulses.coupling_scale()};
  const double f1 = open_transfer_fidelity(pulses, dec, 4000);
  const double f2 = open_transfer_fidelity(pulses, dec, 8000);
  EXPECT_LE(std::abs(f1 - f2), 1e-8);
  EXPECT_LT(f1, closed_transfer_fidelity(pulses, PropagatorConfig::adaptive(1e-10, 2)));
}

TEST(Superposition, BranchDecomposition) {
  const auto pulses = PulseSet::sta_sinusoidal(StaParams{});
  const auto cfg = PropagatorConfig::adaptive(1e-10, 2);
  const DecoherenceParams closed{};
  EXPECT_NEAR(qst_superposition(0.0, 1.0, pulses, closed, cfg), 1.0, 1e-12);
  const double f10 = qst_superposition(1.0, 0.0, pulses, closed, cfg);
  EXPECT_GE(f10, 0.995);

  const Complex amp = transfer_amplitude(pulses);
  EXPECT_NEAR(f10, std::norm(amp), 1e-9);
  const double r = 1.0 / std::sqrt(2.0);
  const double expect = std::norm(0.5 * amp + 0.5);
  const double f = qst_superposition(r, r, pulses, closed, cfg);
  EXPECT_NEAR(f, expect, 1e-8);
  EXPECT_GE(f, 0.99);
  EXPECT_THROW(qst_superposition(1.0, 1.0, pulses, closed, cfg), DomainError);
}

TEST(Observables, SinkExcludedFromLeakage) {
  const auto chain = transfer_chain();
  Matrix rho = Matrix::Zero(18, 18);
  const auto put = [&](const char* l, double p) {
    const auto i = static_cast<Eigen::Index>(kBasis.index(l));
    rho(i, i) = p;
  };
  put("fs,0", 0.5);
  put("ss,0", 0.3);
  put("ff,0", 0.2);
  const auto r = observables(rho, kBasis, chain, BasisState::parse("sf,0"), BasisState::parse("ss,0"));
  EXPECT_DOUBLE_EQ(r.populations[0], 0.5);
  EXPECT_DOUBLE_EQ(r.sink_population, 0.3);
  EXPECT_NEAR(r.leakage, 0.2, 1e-15);
  EXPECT_NEAR(r.total, 1.0, 1e-15);
}
