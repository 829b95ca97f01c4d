#pragma once

#include "lattherm/evolution.hpp"
#include "lattherm/hamiltonian.hpp"

namespace lattherm {

// Translation-invariant fermion chain data: hopping t_k and density-density
// V_k at distance k = 1.., chemical potential mu entering as -mu n_x. The
// pairing amplitudes break gauge invariance and exist only to let the audits
// demonstrate a broken conservation law.
struct FermionInteraction {
  std::vector<double> hopping;
  double mu = 0.0;
  std::vector<double> density;
  std::vector<double> pairing;

  bool gauge_invariant() const {
    for (double d : pairing)
      if (d != 0.0) return false;
    return true;
  }

  int range() const {
    auto last_nonzero = [](const std::vector<double>& v) {
      int r = 0;
      for (std::size_t k = 0; k < v.size(); ++k)
        if (v[k] != 0.0) r = static_cast<int>(k) + 1;
      return r;
    };
    return std::max({last_nonzero(hopping), last_nonzero(density), last_nonzero(pairing)});
  }
};

namespace detail {

// Occupied site = second basis vector, so n = diag(0, 1) = (1 - sigma_z)/2
// and the annihilator is the upper-triangular matrix unit.
inline CMatrix occupation_matrix() {
  CMatrix n = CMatrix::Zero(2, 2);
  n(1, 1) = 1.0;
  return n;
}

inline CMatrix chain_kron(const std::vector<CMatrix>& factors) {
  CMatrix acc = factors.front();
  for (std::size_t i = 1; i < factors.size(); ++i) acc = kron(acc, factors[i]);
  return acc;
}

// X Z...Z X type string on sites {0..k}; the interior carries the parity
// string that the Jordan-Wigner map attaches to a distance-k monomial.
inline CMatrix string_term(const CMatrix& end_a, const CMatrix& end_b, int k) {
  std::vector<CMatrix> factors;
  factors.push_back(end_a);
  for (int i = 1; i < k; ++i) factors.push_back(pauli_z());
  factors.push_back(end_b);
  return chain_kron(factors);
}

inline std::vector<Point> segment(int k) {
  std::vector<Point> pts;
  for (int i = 0; i <= k; ++i) pts.push_back({i});
  return pts;
}

}  // namespace detail

// Spin interaction induced by the Jordan-Wigner map
// a_x -> (prod_{y<x} sigma_z) times the local annihilator:
//   t_k (a+_x a_{x+k} + h.c.)      -> (t_k/2)(X Z^{k-1} X + Y Z^{k-1} Y)
//   V_k n_x n_{x+k}                -> V_k n (x) n
//   -mu n_x                        -> -mu diag(0,1)
//   pairing_k (a+ a+ + aa)         -> (p_k/2)(X Z^{k-1} X - Y Z^{k-1} Y)
inline Interaction jordan_wigner_interaction(const FermionInteraction& f) {
  Interaction phi(SiteSpace(2), 1);
  if (f.mu != 0.0) phi.add({{0}}, -f.mu * detail::occupation_matrix());
  for (std::size_t idx = 0; idx < f.hopping.size(); ++idx) {
    const int k = static_cast<int>(idx) + 1;
    if (f.hopping[idx] == 0.0) continue;
    CMatrix m = 0.5 * f.hopping[idx] *
                (detail::string_term(pauli_x(), pauli_x(), k) +
                 detail::string_term(pauli_y(), pauli_y(), k));
    phi.add(detail::segment(k), m);
  }
  for (std::size_t idx = 0; idx < f.density.size(); ++idx) {
    const int k = static_cast<int>(idx) + 1;
    if (f.density[idx] == 0.0) continue;
    phi.add({{0}, {k}},
            f.density[idx] * kron(detail::occupation_matrix(), detail::occupation_matrix()));
  }
  for (std::size_t idx = 0; idx < f.pairing.size(); ++idx) {
    const int k = static_cast<int>(idx) + 1;
    if (f.pairing[idx] == 0.0) continue;
    CMatrix m = 0.5 * f.pairing[idx] *
                (detail::string_term(pauli_x(), pauli_x(), k) -
                 detail::string_term(pauli_y(), pauli_y(), k));
    phi.add(detail::segment(k), m);
  }
  return phi;
}

// The particle-number interaction N({x}) = n_x.
inline Interaction number_interaction() {
  Interaction n(SiteSpace(2), 1);
  n.add({{0}}, detail::occupation_matrix());
  return n;
}

inline LatticeOperator fermion_hamiltonian(const FermionInteraction& f, const Volume& vol,
                                           long cap = kDefaultDimCap) {
  if (vol.dimension() >= 2)
    throw DimensionNotSupported("fermions: Jordan-Wigner strings are chain-only, got dimension " +
                                std::to_string(vol.dimension()));
  return local_hamiltonian(jordan_wigner_interaction(f), vol, cap);
}

inline LatticeOperator number_operator(const Volume& vol, long cap = kDefaultDimCap) {
  if (vol.dimension() >= 2)
    throw DimensionNotSupported("fermions: number operator is chain-only here");
  return local_hamiltonian(number_interaction(), vol, cap);
}

struct NumberAuditRow {
  double t;
  double value;
  double drift;
};

struct NumberAudit {
  double commutator_norm;  // ||[H, N]||
  std::vector<NumberAuditRow> rows;
};

// Tracks Tr(rho_t N_vol) along the orbit of the induced spin Hamiltonian.
// Gauge-invariant chains commute with N and show zero drift; a pairing term
// shows up both in the commutator norm and in the table.
inline NumberAudit number_conservation_audit(const FermionInteraction& f, const Volume& vol,
                                             const DensityMatrix& rho0,
                                             const std::vector<double>& times,
                                             long cap = kDefaultDimCap) {
  const LatticeOperator h = fermion_hamiltonian(f, vol, cap);
  const LatticeOperator n = number_operator(vol, cap);
  require_same_space(rho0.op(), h, "number_conservation_audit");

  NumberAudit audit;
  audit.commutator_norm = spectral_norm(h.matrix() * n.matrix() - n.matrix() * h.matrix());

  EvolutionContext ctx(h);
  const double base = expectation(rho0, n);
  for (double t : times) {
    const double value = expectation(evolve_state(rho0, ctx, t), n);
    audit.rows.push_back({t, value, std::abs(value - base)});
  }
  return audit;
}

}  // namespace lattherm
