#pragma once

#include "lattherm/hamiltonian.hpp"

namespace lattherm {

// Eigenvalue threshold below which a state is treated as unsupported along a
// spectral direction.
inline constexpr double kSupportTol = 1e-12;

// log sum_i e^{x_i}, shifted for overflow safety.
inline double log_sum_exp(const RVector& x) {
  const double m = x.maxCoeff();
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::exp(x(i) - m);
  return m + std::log(s);
}

// log tr e^{-beta H}.
inline double pressure_of(const LatticeOperator& h, double beta = 1.0) {
  if (!h.is_hermitian()) throw Error("pressure_of: Hamiltonian not Hermitian");
  const auto es = hermitian_eigensystem(h.matrix());
  return log_sum_exp((-beta * es.values).eval());
}

inline double pressure(const Interaction& phi, const Volume& vol, double beta = 1.0,
                       long cap = kDefaultDimCap) {
  return pressure_of(local_hamiltonian(phi, vol, cap), beta);
}

// e^{-beta H} / tr e^{-beta H}, assembled in the eigenbasis of H so the
// spectral weights are exact softmax values.
inline DensityMatrix gibbs_of(const LatticeOperator& h, double beta = 1.0) {
  if (!h.is_hermitian()) throw Error("gibbs_of: Hamiltonian not Hermitian");
  auto es = hermitian_eigensystem(h.matrix());
  RVector x = -beta * es.values;
  const double lz = log_sum_exp(x);
  RVector p(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) p(i) = std::exp(x(i) - lz);
  // Energies come out ascending, so the weights are already descending
  // except at negative beta.
  if (beta >= 0.0)
    return DensityMatrix::from_eigensystem(h.volume(), h.site(), std::move(p),
                                           std::move(es.vectors));
  return DensityMatrix::from_eigensystem(h.volume(), h.site(), p.reverse(),
                                         es.vectors.rowwise().reverse());
}

inline DensityMatrix gibbs_state(const Interaction& phi, const Volume& vol, double beta = 1.0,
                                 long cap = kDefaultDimCap) {
  return gibbs_of(local_hamiltonian(phi, vol, cap), beta);
}

// -sum p log p with 0 log 0 = 0.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < rho.eigenvalues().size(); ++i) {
    const double p = rho.eigenvalues()(i);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

// tr rho (log rho - log sigma), evaluated in sigma's eigenbasis. Returns
// +infinity when rho carries weight outside sigma's support.
inline double relative_entropy(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_space(rho.op(), sigma.op(), "relative_entropy");
  double s = 0.0;
  for (Eigen::Index i = 0; i < rho.eigenvalues().size(); ++i) {
    const double p = rho.eigenvalues()(i);
    if (p > 0.0) s += p * std::log(p);
  }
  double outside = 0.0;
  for (Eigen::Index j = 0; j < sigma.eigenvalues().size(); ++j) {
    const double q = sigma.eigenvalues()(j);
    const double w =
        (sigma.eigenvectors().col(j).adjoint() * rho.matrix() * sigma.eigenvectors().col(j))(0)
            .real();
    if (q > kSupportTol)
      s -= w * std::log(q);
    else
      outside += std::max(w, 0.0);
  }
  if (outside > kSupportTol) return std::numeric_limits<double>::infinity();
  return std::max(s, 0.0);
}

// Gap of the finite-volume variational principle,
//   P - (S(rho) - beta tr(rho H)),
// cross-checked against the relative entropy to the Gibbs state; the two are
// the same quantity through different arithmetic.
inline double variational_gap(const DensityMatrix& rho, const Interaction& phi, const Volume& vol,
                              double beta = 1.0, long cap = kDefaultDimCap) {
  if (rho.volume() != vol) throw VolumeMismatch("variational_gap: state volume differs");
  const LatticeOperator h = local_hamiltonian(phi, vol, cap);
  const double p = pressure_of(h, beta);
  const double gap = p - (von_neumann_entropy(rho) - beta * expectation(rho, h));
  const double cross = relative_entropy(rho, gibbs_of(h, beta));
  if (std::abs(gap - cross) > 1e-9)
    throw Error("variational_gap: identity check failed, gap " + std::to_string(gap) +
                " vs relative entropy " + std::to_string(cross));
  return gap;
}

// Per-site equilibrium summary of one finite volume.
struct ThermoPoint {
  int side = 0;
  long sites = 0;
  double pressure_per_site = 0;
  double entropy_per_site = 0;
  double energy_per_site = 0;
};

inline ThermoPoint thermo_point(const Interaction& phi, const Volume& vol, double beta = 1.0,
                                long cap = kDefaultDimCap) {
  const LatticeOperator h = local_hamiltonian(phi, vol, cap);
  const DensityMatrix rho = gibbs_of(h, beta);
  ThermoPoint pt;
  pt.side = vol.side();
  pt.sites = vol.size();
  const double n = static_cast<double>(vol.size());
  pt.pressure_per_site = pressure_of(h, beta) / n;
  pt.entropy_per_site = von_neumann_entropy(rho) / n;
  pt.energy_per_site = expectation(rho, h) / n;
  return pt;
}

}  // namespace lattherm
