#pragma once

#include "lattherm/thermal.hpp"

namespace lattherm {

// A Hamiltonian with its eigensystem cached once; every dynamical quantity on
// the volume reuses the same basis.
class EvolutionContext {
 public:
  explicit EvolutionContext(LatticeOperator h) : h_(std::move(h)) {
    if (!h_.is_hermitian()) throw Error("EvolutionContext: Hamiltonian not Hermitian");
    es_ = hermitian_eigensystem(h_.matrix());
    const double recon =
        (es_.vectors * es_.values.asDiagonal() * es_.vectors.adjoint() - h_.matrix()).norm();
    if (recon > 1e-10 * std::max(1.0, h_.matrix().norm()))
      throw Error("EvolutionContext: eigensystem reconstruction off by " + std::to_string(recon));
  }

  const LatticeOperator& hamiltonian() const { return h_; }
  const Volume& volume() const { return h_.volume(); }
  const SiteSpace& site() const { return h_.site(); }
  const HermitianEigen& eigen() const { return es_; }
  double spectral_width() const { return es_.values.maxCoeff() - es_.values.minCoeff(); }

  // U e^{-itD} U†.
  CMatrix propagator(double t) const {
    CMatrix phases = CMatrix::Zero(es_.values.size(), es_.values.size());
    for (Eigen::Index k = 0; k < es_.values.size(); ++k)
      phases(k, k) = std::exp(Complex(0, -t * es_.values(k)));
    return es_.vectors * phases * es_.vectors.adjoint();
  }

 private:
  LatticeOperator h_;
  HermitianEigen es_;
};

// e^{-itH} rho e^{itH}. The evolved state keeps the exact spectrum of rho;
// only its eigenbasis is rotated by the propagator.
inline DensityMatrix evolve_state(const DensityMatrix& rho, const EvolutionContext& ctx,
                                  double t) {
  require_same_space(rho.op(), ctx.hamiltonian(), "evolve_state");
  if (t == 0.0) return rho;
  return DensityMatrix::from_eigensystem(rho.volume(), rho.site(), rho.eigenvalues(),
                                         ctx.propagator(t) * rho.eigenvectors());
}

// e^{izH} A e^{-izH} for complex z, entire at finite volume. The conjugation
// only sees eigenvalue differences, so a spectral shift cancels exactly; the
// guard is on spectral width times |Im z|.
inline LatticeOperator evolve_observable_complex(const LatticeOperator& a,
                                                 const EvolutionContext& ctx, Complex z,
                                                 double im_bound = 2.0,
                                                 double width_cap = 200.0) {
  require_same_space(a, ctx.hamiltonian(), "evolve_observable_complex");
  if (std::abs(z.imag()) > im_bound)
    throw Error("evolve_observable_complex: |Im z| = " + std::to_string(std::abs(z.imag())) +
                " beyond configured strip " + std::to_string(im_bound));
  if (ctx.spectral_width() * std::abs(z.imag()) > width_cap)
    throw OverflowRisk("evolve_observable_complex: spectral width times |Im z| exceeds " +
                       std::to_string(width_cap));
  const auto& es = ctx.eigen();
  CMatrix tilde = es.vectors.adjoint() * a.matrix() * es.vectors;
  for (Eigen::Index j = 0; j < tilde.rows(); ++j)
    for (Eigen::Index k = 0; k < tilde.cols(); ++k)
      tilde(j, k) *= std::exp(Complex(0, 1) * z * (es.values(j) - es.values(k)));
  return {a.volume(), a.site(), es.vectors * tilde * es.vectors.adjoint()};
}

namespace detail {

// (1/T) integral_0^T e^{-it delta} dt = e^{-iT delta/2} sinc(T delta / 2).
inline Complex dephasing_factor(double delta, double big_t) {
  const double x = 0.5 * big_t * delta;
  if (x == 0.0) return 1.0;
  return std::exp(Complex(0, -x)) * (std::sin(x) / x);
}

// The same average under an n-step trapezoid rule, evaluated in closed form:
// sum_k w_k e^{-i t_k delta} is a geometric sum with stable half-angle
// factorizations, so the quadrature never needs the n individual time points.
inline Complex trapezoid_factor(double delta, double big_t, long n) {
  const double h = big_t / static_cast<double>(n);
  const double sh = std::sin(0.5 * h * delta);
  if (sh == 0.0) return 1.0;
  const double half_t = 0.5 * big_t * delta;
  const Complex bracket =
      std::cos(half_t) + std::sin(0.5 * (big_t - h) * delta) / sh;
  return (h / big_t) * std::exp(Complex(0, -half_t)) * bracket;
}

template <typename Factor>
DensityMatrix averaged_state(const DensityMatrix& rho, const EvolutionContext& ctx,
                             Factor&& factor) {
  const auto& es = ctx.eigen();
  CMatrix tilde = es.vectors.adjoint() * rho.matrix() * es.vectors;
  for (Eigen::Index j = 0; j < tilde.rows(); ++j)
    for (Eigen::Index k = 0; k < tilde.cols(); ++k)
      tilde(j, k) *= factor(es.values(j) - es.values(k));
  CMatrix avg = es.vectors * tilde * es.vectors.adjoint();
  avg = 0.5 * (avg + avg.adjoint().eval());
  return DensityMatrix::from_operator(LatticeOperator(rho.volume(), rho.site(), std::move(avg)));
}

}  // namespace detail

// Steps for a target local phase error: ||H|| T / n <= 0.1.
inline long cesaro_auto_steps(const EvolutionContext& ctx, double big_t) {
  const double scale = spectral_norm(ctx.hamiltonian().matrix(), true);
  return std::max<long>(2, static_cast<long>(std::ceil(scale * big_t / 0.1)));
}

// Trapezoidal Cesaro average (1/T) integral of the evolved state over [0, T].
// steps = 0 picks the automatic grid.
inline DensityMatrix cesaro_average(const DensityMatrix& rho, const EvolutionContext& ctx,
                                    double big_t, long steps = 0) {
  require_same_space(rho.op(), ctx.hamiltonian(), "cesaro_average");
  if (big_t <= 0.0) throw Error("cesaro_average: horizon must be positive");
  if (steps == 0) steps = cesaro_auto_steps(ctx, big_t);
  if (steps < 2) throw Error("cesaro_average: need at least 2 steps");
  return detail::averaged_state(rho, ctx, [big_t, steps](double d) {
    return detail::trapezoid_factor(d, big_t, steps);
  });
}

// Exact time average over [0, T] through the closed-form dephasing factors.
inline DensityMatrix cesaro_dephased(const DensityMatrix& rho, const EvolutionContext& ctx,
                                     double big_t) {
  require_same_space(rho.op(), ctx.hamiltonian(), "cesaro_dephased");
  if (big_t <= 0.0) throw Error("cesaro_dephased: horizon must be positive");
  return detail::averaged_state(
      rho, ctx, [big_t](double d) { return detail::dephasing_factor(d, big_t); });
}

// T -> infinity limit: off-diagonal elements across spectral gaps wider than
// gap_tol are removed, degenerate blocks are kept whole.
inline DensityMatrix diagonal_ensemble(const DensityMatrix& rho, const EvolutionContext& ctx,
                                       double gap_tol = 1e-9) {
  require_same_space(rho.op(), ctx.hamiltonian(), "diagonal_ensemble");
  return detail::averaged_state(
      rho, ctx, [gap_tol](double d) { return std::abs(d) <= gap_tol ? 1.0 : 0.0; });
}

}  // namespace lattherm
