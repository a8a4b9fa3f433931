#include "staqst/hilbert.hpp"

#include <cmath>
#include <sstream>

#include "staqst/error.hpp"

namespace staqst {

char level_symbol(Level level) {
  switch (level) {
    case Level::f: return 'f';
    case Level::s: return 's';
    case Level::e: return 'e';
  }
  return '?';
}

namespace {

Level parse_level(char c) {
  switch (c) {
    case 'f': return Level::f;
    case 's': return Level::s;
    case 'e': return Level::e;
    default: break;
  }
  throw DomainError(std::string("unknown atomic level '") + c + "' (expected f, s or e)");
}

}  // namespace

BasisState BasisState::parse(std::string_view label) {
  const auto comma = label.find(',');
  if (comma == std::string_view::npos || comma == 0 || comma + 1 >= label.size()) {
    throw DomainError("malformed basis label '" + std::string(label) +
                      "' (expected e.g. \"fs,0\")");
  }
  BasisState st;
  for (char c : label.substr(0, comma)) st.atoms.push_back(parse_level(c));
  int n = 0;
  for (char c : label.substr(comma + 1)) {
    if (c < '0' || c > '9') {
      throw DomainError("malformed photon number in '" + std::string(label) + "'");
    }
    n = 10 * n + (c - '0');
  }
  st.photons = n;
  return st;
}

std::string BasisState::label() const {
  std::string out;
  for (Level l : atoms) out.push_back(level_symbol(l));
  out += ',' + std::to_string(photons);
  return out;
}

Basis::Basis(int num_atoms, int cutoff) : num_atoms_(num_atoms), cutoff_(cutoff) {
  if (num_atoms < 1 || num_atoms > 2) {
    throw DomainError("num_atoms must be 1 or 2, got " + std::to_string(num_atoms));
  }
  if (cutoff < 1) {
    throw DomainError("photon cutoff must be >= 1, got " + std::to_string(cutoff));
  }
  int atom_configs = 1;
  for (int i = 0; i < num_atoms; ++i) atom_configs *= 3;
  states_.reserve(static_cast<std::size_t>(atom_configs * (cutoff + 1)));
  for (int c = 0; c < atom_configs; ++c) {
    std::vector<Level> atoms(static_cast<std::size_t>(num_atoms));
    int rest = c;
    for (int i = num_atoms - 1; i >= 0; --i) {
      atoms[static_cast<std::size_t>(i)] = static_cast<Level>(rest % 3);
      rest /= 3;
    }
    for (int n = 0; n <= cutoff; ++n) states_.push_back({atoms, n});
  }
}

bool Basis::contains(const BasisState& state) const {
  if (static_cast<int>(state.atoms.size()) != num_atoms_) return false;
  return state.photons >= 0 && state.photons <= cutoff_;
}

std::size_t Basis::index(const BasisState& state) const {
  if (!contains(state)) {
    throw DomainError("state |" + state.label() + "> is not in the basis (atoms=" +
                      std::to_string(num_atoms_) + ", cutoff=" + std::to_string(cutoff_) + ")");
  }
  std::size_t config = 0;
  for (Level l : state.atoms) config = 3 * config + static_cast<std::size_t>(l);
  return config * static_cast<std::size_t>(cutoff_ + 1) + static_cast<std::size_t>(state.photons);
}

Vector Basis::ket(const BasisState& state) const {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dimension()));
  v(static_cast<Eigen::Index>(index(state))) = 1.0;
  return v;
}

Basis build_basis(int num_atoms, int cutoff) { return Basis(num_atoms, cutoff); }

Matrix atom_transition(const Basis& basis, int atom, Level to, Level from) {
  if (atom < 0 || atom >= basis.num_atoms()) {
    throw DomainError("atom index out of range: " + std::to_string(atom));
  }
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  Matrix m = Matrix::Zero(dim, dim);
  const auto k = static_cast<std::size_t>(atom);
  for (std::size_t j = 0; j < basis.dimension(); ++j) {
    const BasisState& src = basis.state(j);
    if (src.atoms[k] != from) continue;
    BasisState dst = src;
    dst.atoms[k] = to;
    m(static_cast<Eigen::Index>(basis.index(dst)), static_cast<Eigen::Index>(j)) = 1.0;
  }
  return m;
}

Matrix annihilation(const Basis& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t j = 0; j < basis.dimension(); ++j) {
    const BasisState& src = basis.state(j);
    if (src.photons == 0) continue;
    BasisState dst = src;
    dst.photons -= 1;
    m(static_cast<Eigen::Index>(basis.index(dst)), static_cast<Eigen::Index>(j)) =
        std::sqrt(static_cast<double>(src.photons));
  }
  return m;
}

HamiltonianTerms::HamiltonianTerms(const Basis& basis) : basis_(basis) {
  const Matrix a = annihilation(basis);
  for (int l = 0; l < basis.num_atoms(); ++l) {
    const Matrix fe = atom_transition(basis, l, Level::f, Level::e);
    const Matrix es_a = atom_transition(basis, l, Level::e, Level::s) * a;
    laser_.push_back(fe + fe.adjoint());
    cavity_.push_back(es_a + es_a.adjoint());
  }
}

void HamiltonianTerms::build_into(std::span<const AtomControls> controls, Matrix& out) const {
  if (controls.size() != laser_.size()) {
    throw DomainError("expected " + std::to_string(laser_.size()) +
                      " atom control pairs, got " + std::to_string(controls.size()));
  }
  const auto dim = static_cast<Eigen::Index>(basis_.dimension());
  out.setZero(dim, dim);
  for (std::size_t l = 0; l < controls.size(); ++l) {
    const auto& c = controls[l];
    if (!std::isfinite(c.omega) || !std::isfinite(c.g)) {
      throw DomainError("non-finite control amplitude on atom " + std::to_string(l + 1));
    }
    if (c.omega != 0.0) out += c.omega * laser_[l];
    if (c.g != 0.0) out += c.g * cavity_[l];
  }
}

Matrix HamiltonianTerms::build(std::span<const AtomControls> controls) const {
  Matrix h;
  build_into(controls, h);
  return h;
}

Matrix build_hamiltonian(const Basis& basis, std::span<const AtomControls> controls) {
  return HamiltonianTerms(basis).build(controls);
}

Matrix excitation_operator(const Basis& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const BasisState& st = basis.state(i);
    int n = st.photons;
    for (Level l : st.atoms) n += (l == Level::s) ? 0 : 1;
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = static_cast<double>(n);
  }
  return m;
}

void DecoherenceParams::validate() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw DomainError("cavity decay rate kappa must be finite and >= 0");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw DomainError("spontaneous emission rate gamma must be finite and >= 0");
  }
}

std::vector<CollapseOperator> collapse_operators(const Basis& basis,
                                                 const DecoherenceParams& dec) {
  dec.validate();
  std::vector<CollapseOperator> ops;
  ops.push_back({annihilation(basis), dec.kappa, "a"});
  for (int k = 0; k < basis.num_atoms(); ++k) {
    for (Level m : {Level::s, Level::f}) {
      std::string label = "S";
      label += level_symbol(m);
      label += "e_" + std::to_string(k + 1);
      ops.push_back({atom_transition(basis, k, m, Level::e), dec.branch_rate(), label});
    }
  }
  return ops;
}

Matrix subspace_projector(const Basis& basis, std::span<const BasisState> states) {
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  Matrix p = Matrix::Zero(dim, dim);
  for (const auto& st : states) {
    const auto i = static_cast<Eigen::Index>(basis.index(st));
    p(i, i) = 1.0;
  }
  return p;
}

std::vector<BasisState> transfer_chain() {
  return {BasisState::parse("fs,0"), BasisState::parse("es,0"), BasisState::parse("ss,1"),
          BasisState::parse("se,0"), BasisState::parse("sf,0")};
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace staqst
