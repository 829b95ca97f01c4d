#pragma once

#include "lattherm/evolution.hpp"

namespace lattherm {

// e^{izA} for Hermitian A and complex z.
inline CMatrix complex_exponential(const LatticeOperator& a, Complex z,
                                   double exponent_cap = 700.0) {
  if (!a.is_hermitian()) throw Error("complex_exponential: operator not Hermitian");
  HermitianEigen es = hermitian_eigensystem(a.matrix());
  const double reach =
      std::abs(z.imag()) * std::max(std::abs(es.values.minCoeff()), std::abs(es.values.maxCoeff()));
  if (reach > exponent_cap)
    throw OverflowRisk("complex_exponential: |Im z|·spectral radius exceeds " +
                       std::to_string(exponent_cap));
  CMatrix phases = CMatrix::Zero(es.values.size(), es.values.size());
  for (Eigen::Index k = 0; k < es.values.size(); ++k)
    phases(k, k) = std::exp(Complex(0, 1) * z * es.values(k));
  return es.vectors * phases * es.vectors.adjoint();
}

// Gibbs density of H + V.
inline DensityMatrix perturbed_gibbs(const LatticeOperator& h, const LatticeOperator& v,
                                     double beta = 1.0) {
  require_same_space(h, v, "perturbed_gibbs");
  if (!v.is_hermitian()) throw Error("perturbed_gibbs: perturbation not Hermitian");
  return gibbs_of(h + v, beta);
}

namespace detail {

// Upper-triangular block-Toeplitz matrices, stored as the sequence of blocks
// along the first row. The algebra is closed under products, so the matrix
// exponential of the order-grading generator never needs the full blown-up
// dimension.
using BlockSeq = std::vector<CMatrix>;

inline BlockSeq seq_identity(std::size_t len, Eigen::Index d) {
  BlockSeq s(len, CMatrix::Zero(d, d));
  s[0] = CMatrix::Identity(d, d);
  return s;
}

inline BlockSeq seq_product(const BlockSeq& a, const BlockSeq& b) {
  const Eigen::Index d = a[0].rows();
  BlockSeq c(a.size(), CMatrix::Zero(d, d));
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t j = 0; j <= k; ++j) c[k] += a[j] * b[k - j];
  return c;
}

inline double seq_norm(const BlockSeq& a) {
  double m = 0;
  for (const auto& blk : a) m = std::max(m, blk.norm());
  return m;
}

// e^M restricted to the first block row, for M with diagonal blocks A and
// first superdiagonal blocks B, via scaling and squaring on the sequence.
inline BlockSeq block_toeplitz_exp(const CMatrix& a, const CMatrix& b, std::size_t len) {
  const Eigen::Index d = a.rows();
  const double scale = a.norm() + b.norm();
  const int squarings = scale <= 0.5 ? 0 : static_cast<int>(std::ceil(std::log2(scale / 0.5)));
  const double factor = std::ldexp(1.0, -squarings);

  BlockSeq gen(len, CMatrix::Zero(d, d));
  gen[0] = factor * a;
  if (len > 1) gen[1] = factor * b;

  BlockSeq sum = seq_identity(len, d);
  BlockSeq term = seq_identity(len, d);
  for (int j = 1; j <= 60; ++j) {
    term = seq_product(term, gen);
    for (std::size_t k = 0; k < len; ++k) term[k] /= static_cast<double>(j);
    for (std::size_t k = 0; k < len; ++k) sum[k] += term[k];
    if (seq_norm(term) < 1e-22 * std::max(1.0, seq_norm(sum))) break;
  }
  for (int j = 0; j < squarings; ++j) sum = seq_product(sum, sum);
  return sum;
}

}  // namespace detail

// Araki-Dyson expansional E_V(z): the time-ordered series
// sum_n (iz)^n int_{s_1<=...<=s_n} alpha^{z s_n}(V) ... alpha^{z s_1}(V) ds.
// Order k in V solves X_k' = X_k (izH) + X_{k-1} (izV), so the partial sums
// sit in the first block row of a block-bidiagonal exponential. At finite
// dimension the series sums to e^{iz(H+V)} e^{-izH}.
inline LatticeOperator expansional(const LatticeOperator& h, const LatticeOperator& v, Complex z,
                                   long n_max = 40, double tail_tol = 1e-12) {
  require_same_space(h, v, "expansional");
  if (!h.is_hermitian() || !v.is_hermitian())
    throw Error("expansional: Hamiltonian and perturbation must be Hermitian");

  const Eigen::Index d = h.matrix().rows();
  const double growth = std::abs(z) * spectral_norm(v.matrix(), true);
  if (growth == 0.0) return {h.volume(), h.site(), CMatrix::Identity(d, d)};

  long order = 1;
  while (order <= n_max &&
         order * std::log(growth) - std::lgamma(static_cast<double>(order) + 1.0) >=
             std::log(tail_tol))
    ++order;
  if (order > n_max)
    throw TruncationNotConverged("expansional: tail (" + std::to_string(growth) + ")^n/n! stays above " +
                                 std::to_string(tail_tol) + " up to order " + std::to_string(n_max));

  const Complex iz = Complex(0, 1) * z;
  detail::BlockSeq row = detail::block_toeplitz_exp(iz * h.matrix(), iz * v.matrix(),
                                                    static_cast<std::size_t>(order) + 1);
  CMatrix truncated = CMatrix::Zero(d, d);
  for (const auto& blk : row) truncated += blk;
  return {h.volume(), h.site(), truncated * complex_exponential(h, -z)};
}

struct SandwichBounds {
  double upper_constant;  // C_V
  double lower_constant;  // D_V
  double upper_margin;    // min eig of C_V·omega - omega_V
  double lower_margin;    // min eig of omega_V - D_V·omega
};

// Two-sided comparison of the perturbed Gibbs state against the unperturbed
// one: D_V·omega <= omega_V <= C_V·omega with C_V = exp(||V|| + ||alpha^{i/2}(V)||)
// and D_V the reverse constant built from the H - V dynamics.
inline SandwichBounds sandwich_bounds(const LatticeOperator& h, const LatticeOperator& v) {
  require_same_space(h, v, "sandwich_bounds");
  if (!v.is_hermitian()) throw Error("sandwich_bounds: perturbation not Hermitian");

  const double vnorm = spectral_norm(v.matrix(), true);
  const Complex half_i(0, 0.5);

  EvolutionContext forward(h);
  const double alpha_fwd =
      spectral_norm(evolve_observable_complex(v, forward, half_i).matrix());
  EvolutionContext backward(h - v);
  const double alpha_bwd =
      spectral_norm(evolve_observable_complex(v, backward, half_i).matrix());

  SandwichBounds out;
  out.upper_constant = std::exp(vnorm + alpha_fwd);
  out.lower_constant = std::exp(-vnorm - alpha_bwd);

  const DensityMatrix omega = gibbs_of(h);
  const DensityMatrix omega_v = perturbed_gibbs(h, v);
  const CMatrix upper_gap = out.upper_constant * omega.matrix() - omega_v.matrix();
  const CMatrix lower_gap = omega_v.matrix() - out.lower_constant * omega.matrix();
  out.upper_margin = hermitian_eigensystem(0.5 * (upper_gap + upper_gap.adjoint().eval()))
                         .values.minCoeff();
  out.lower_margin = hermitian_eigensystem(0.5 * (lower_gap + lower_gap.adjoint().eval()))
                         .values.minCoeff();
  return out;
}

}  // namespace lattherm
