#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace staqst {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Atomic level of a Lambda-type atom. The numeric order fixes the basis layout.
enum class Level : std::uint8_t { f = 0, s = 1, e = 2 };

char level_symbol(Level level);

/// One product basis element: a level per atom plus the cavity photon number.
struct BasisState {
  std::vector<Level> atoms;
  int photons = 0;

  bool operator==(const BasisState&) const = default;

  /// Parses labels of the form "fs,0" (atom levels, comma, photon count).
  static BasisState parse(std::string_view label);
  std::string label() const;
};

/// Ordered product basis of num_atoms three-level atoms and a Fock space
/// truncated at `cutoff` photons. Ordering is lexicographic in
/// (atom 1, ..., atom n, photons) with f < s < e.
class Basis {
 public:
  Basis(int num_atoms, int cutoff);

  int num_atoms() const { return num_atoms_; }
  int cutoff() const { return cutoff_; }
  std::size_t dimension() const { return states_.size(); }

  const BasisState& state(std::size_t i) const { return states_.at(i); }
  const std::vector<BasisState>& states() const { return states_; }

  /// Throws DomainError when the state is not part of this basis.
  std::size_t index(const BasisState& state) const;
  std::size_t index(std::string_view label) const { return index(BasisState::parse(label)); }
  bool contains(const BasisState& state) const;

  /// Unit vector |state>.
  Vector ket(const BasisState& state) const;
  Vector ket(std::string_view label) const { return ket(BasisState::parse(label)); }

 private:
  int num_atoms_;
  int cutoff_;
  std::vector<BasisState> states_;
};

Basis build_basis(int num_atoms, int cutoff);

/// Instantaneous drive on one atom: laser Rabi frequency on f<->e and
/// cavity coupling on e<->s, both in rad/us.
struct AtomControls {
  double omega = 0.0;
  double g = 0.0;
};

/// |to><from| acting on atom `atom` (0-based), identity elsewhere.
Matrix atom_transition(const Basis& basis, int atom, Level to, Level from);

/// Truncated cavity annihilation operator.
Matrix annihilation(const Basis& basis);

/// Hermitian pieces of the interaction Hamiltonian, precomputed once per
/// basis so that H(t) is a weighted sum:
///   H = sum_l omega_l * laser[l] + g_l * cavity[l]
/// with laser[l] = |f><e|_l + h.c. and cavity[l] = |e><s|_l a + h.c.
class HamiltonianTerms {
 public:
  explicit HamiltonianTerms(const Basis& basis);

  const Basis& basis() const { return basis_; }

  /// Throws DomainError on a wrong number of controls or non-finite values.
  Matrix build(std::span<const AtomControls> controls) const;
  void build_into(std::span<const AtomControls> controls, Matrix& out) const;

 private:
  Basis basis_;
  std::vector<Matrix> laser_;
  std::vector<Matrix> cavity_;
};

/// Rotating-wave interaction Hamiltonian
///   H = sum_l [Omega_l |f><e|_l + g_l |e><s|_l a + h.c.].
Matrix build_hamiltonian(const Basis& basis, std::span<const AtomControls> controls);

/// Diagonal excitation count: atoms in |f> or |e> plus photons. An atom in
/// |f> holds the quantum the laser promotes to |e>, so H commutes with it and
/// every state of the transfer chain has count 1.
Matrix excitation_operator(const Basis& basis);

struct DecoherenceParams {
  double kappa = 0.0;  ///< cavity leakage rate, rad/us
  double gamma = 0.0;  ///< total spontaneous emission rate of |e>, rad/us

  /// Rate of each decay branch e->s and e->f.
  double branch_rate() const { return gamma / 2.0; }
  bool closed() const { return kappa == 0.0 && gamma == 0.0; }
  void validate() const;
};

struct CollapseOperator {
  Matrix op;
  double rate = 0.0;
  std::string label;
};

/// Cavity decay `a` at rate kappa, then |m><e| on each atom (m = s, f) at
/// rate gamma/2.
std::vector<CollapseOperator> collapse_operators(const Basis& basis,
                                                 const DecoherenceParams& dec);

/// Orthogonal projector onto span{states}.
Matrix subspace_projector(const Basis& basis, std::span<const BasisState> states);

/// The five-state transfer chain |fs,0>, |es,0>, |ss,1>, |se,0>, |sf,0>.
std::vector<BasisState> transfer_chain();

/// Max-abs element of a matrix.
double max_abs(const Matrix& m);

}  // namespace staqst
