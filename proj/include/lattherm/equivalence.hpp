#pragma once

#include "lattherm/hamiltonian.hpp"

namespace lattherm {

// A local observable used to witness (in)equivalence of two interactions.
// Probes need not be Hermitian; matrix units are the generating case.
struct Probe {
  std::string name;
  Volume support;
  CMatrix matrix;
};

// Default probe family: every single-site matrix unit at the origin plus every
// stored term of either interaction on its own support. Commutation against
// these generators decides commutation against all local observables.
inline std::vector<Probe> default_probes(const Interaction& phi, const Interaction& psi) {
  if (phi.site() != psi.site() || phi.dimension() != psi.dimension())
    throw VolumeMismatch("default_probes: incompatible interactions");
  const int d = phi.dimension();
  const Volume origin = Volume::from_sites(d, {Point(static_cast<size_t>(d), 0)});
  std::vector<Probe> probes;
  for (int i = 0; i < phi.site().dim; ++i)
    for (int j = 0; j < phi.site().dim; ++j)
      probes.push_back({"unit(" + std::to_string(i) + "," + std::to_string(j) + ")@0", origin,
                        matrix_unit(phi.site().dim, i, j)});
  auto add_terms = [&](const Interaction& chi, const std::string& tag) {
    for (const auto& [shape, m] : chi.terms())
      probes.push_back({tag + shape.to_string(), Volume::from_sites(d, shape.points), m});
  };
  add_terms(phi, "phi");
  add_terms(psi, "psi");
  return probes;
}

// Norm of sum_{X meeting supp(A)} [Delta(X), A], evaluated inside the support
// box grown by the range of Delta (which already contains every such X).
inline double commutator_defect(const Interaction& delta, const Probe& probe,
                                long cap = kDefaultDimCap) {
  const int d = delta.dimension();
  if (probe.support.dimension() != d)
    throw VolumeMismatch("commutator_defect: probe dimension mismatch");
  const int m = delta.range();
  Point lo = probe.support.min_corner(), hi = probe.support.max_corner();
  for (int ax = 0; ax < d; ++ax) {
    lo[ax] -= m;
    hi[ax] += m;
  }
  const Volume ambient = Volume::box(lo, hi);
  const long dim = state_dim(ambient, delta.site(), cap);
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (const auto& [shape, term] : delta.terms())
    for (const auto& t : translates_within(shape, ambient)) {
      std::vector<Point> support;
      support.reserve(shape.points.size());
      bool meets_probe = false;
      for (const auto& p : shape.points) {
        Point s = point_add(p, t);
        meets_probe = meets_probe || probe.support.contains(s);
        support.push_back(std::move(s));
      }
      if (!meets_probe) continue;
      std::sort(support.begin(), support.end());
      sum += embed_matrix(term, support, ambient, delta.site());
    }
  const CMatrix a = embed_matrix(probe.matrix, probe.support.sites(), ambient, delta.site());
  return spectral_norm(sum * a - a * sum);
}

struct EquivalenceVerdict {
  bool equivalent;
  double max_defect;        // largest commutator norm over all probes
  std::string witness;      // first violating probe, empty when equivalent
  double witness_defect;    // its commutator norm, 0 when equivalent
};

// Two interactions are physically equivalent when their difference commutes
// with every local observable, i.e. differs from zero only by scalars.
inline EquivalenceVerdict physically_equivalent(const Interaction& phi, const Interaction& psi,
                                                const std::vector<Probe>& probes,
                                                double tol = 1e-10, long cap = kDefaultDimCap) {
  if (probes.empty()) throw Error("physically_equivalent: probe set is empty");
  const Interaction delta = phi - psi;
  EquivalenceVerdict v{true, 0.0, "", 0.0};
  if (delta.empty()) return v;
  for (const auto& probe : probes) {
    const double defect = commutator_defect(delta, probe, cap);
    v.max_defect = std::max(v.max_defect, defect);
    if (defect > tol && v.equivalent) {
      v.equivalent = false;
      v.witness = probe.name;
      v.witness_defect = defect;
    }
  }
  return v;
}

inline EquivalenceVerdict physically_equivalent(const Interaction& phi, const Interaction& psi,
                                                double tol = 1e-10, long cap = kDefaultDimCap) {
  return physically_equivalent(phi, psi, default_probes(phi, psi), tol, cap);
}

// For each volume, the distance of (H(phi) - H(psi))/|vol| from the scalar
// c = normalized trace of the specific energy observable of phi - psi. The
// sequence decays to zero precisely for physically equivalent pairs.
inline std::vector<std::pair<long, double>> hamiltonian_density_difference(
    const Interaction& phi, const Interaction& psi, const std::vector<Volume>& vols,
    long cap = kDefaultDimCap) {
  const Interaction delta = phi - psi;
  double c = 0.0;
  if (!delta.empty()) {
    const LatticeOperator e = specific_energy_observable(delta, cap);
    c = e.matrix().trace().real() / static_cast<double>(e.dim());
  }
  std::vector<std::pair<long, double>> out;
  long prev = 0;
  for (const auto& vol : vols) {
    if (vol.size() <= prev)
      throw Error("hamiltonian_density_difference: volumes must be strictly ascending");
    prev = vol.size();
    const LatticeOperator h = local_hamiltonian(delta, vol, cap);
    const CMatrix a =
        h.matrix() / static_cast<double>(vol.size()) -
        c * CMatrix::Identity(h.dim(), h.dim());
    out.emplace_back(vol.size(), spectral_norm(a, true));
  }
  return out;
}

}  // namespace lattherm
