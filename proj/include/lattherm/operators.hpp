#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "lattherm/spectral.hpp"

namespace lattherm {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdFloor = -1e-12;
inline constexpr double kTraceOneTol = 1e-12;
inline constexpr double kEigenReconTol = 1e-10;
inline constexpr double kFaithfulFloor = 1e-300;

// A matrix acting on the tensor-product space of a finite volume.
class LatticeOperator {
 public:
  LatticeOperator(Volume vol, SiteSpace site, CMatrix matrix)
      : volume_(std::move(vol)), site_(site), matrix_(std::move(matrix)) {
    long dim = 1;
    for (long k = 0; k < volume_.size(); ++k) dim *= site_.dim;
    if (matrix_.rows() != dim || matrix_.cols() != dim)
      throw Error("LatticeOperator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                  std::to_string(matrix_.cols()) + " but volume needs " + std::to_string(dim));
    hermitian_ = lattherm::is_hermitian(matrix_, kHermitianTol);
  }

  const Volume& volume() const { return volume_; }
  const SiteSpace& site() const { return site_; }
  const CMatrix& matrix() const { return matrix_; }
  long dim() const { return matrix_.rows(); }
  bool is_hermitian() const { return hermitian_; }

  LatticeOperator adjoint() const { return {volume_, site_, matrix_.adjoint()}; }

 private:
  Volume volume_;
  SiteSpace site_;
  CMatrix matrix_;
  bool hermitian_;
};

inline void require_same_space(const LatticeOperator& a, const LatticeOperator& b,
                               const char* who) {
  if (a.site() != b.site()) throw VolumeMismatch(std::string(who) + ": site spaces differ");
  if (a.volume() != b.volume()) throw VolumeMismatch(std::string(who) + ": volumes differ");
}

inline LatticeOperator operator+(const LatticeOperator& a, const LatticeOperator& b) {
  require_same_space(a, b, "operator+");
  return {a.volume(), a.site(), a.matrix() + b.matrix()};
}

inline LatticeOperator operator-(const LatticeOperator& a, const LatticeOperator& b) {
  require_same_space(a, b, "operator-");
  return {a.volume(), a.site(), a.matrix() - b.matrix()};
}

inline LatticeOperator operator*(Complex c, const LatticeOperator& a) {
  return {a.volume(), a.site(), c * a.matrix()};
}

inline LatticeOperator operator*(double c, const LatticeOperator& a) {
  return {a.volume(), a.site(), c * a.matrix()};
}

inline LatticeOperator operator*(const LatticeOperator& a, const LatticeOperator& b) {
  require_same_space(a, b, "operator*");
  return {a.volume(), a.site(), a.matrix() * b.matrix()};
}

inline LatticeOperator identity_on(const Volume& vol, const SiteSpace& site) {
  long dim = 1;
  for (long k = 0; k < vol.size(); ++k) dim *= site.dim;
  return {vol, site, CMatrix::Identity(dim, dim)};
}

// Identity-extend a local operator into a larger volume.
inline LatticeOperator embed(const LatticeOperator& local, const Volume& target) {
  if (!local.volume().subset_of(target))
    throw SupportNotContained("embed: operator support not contained in target volume");
  return {target, local.site(),
          embed_matrix(local.matrix(), local.volume().sites(), target, local.site())};
}

inline double operator_norm(const LatticeOperator& op) {
  return spectral_norm(op.matrix(), op.is_hermitian());
}

enum class MatrixFn { Exp, Log, Power };

// Spectral calculus for Hermitian operators.
inline LatticeOperator matrix_function(const LatticeOperator& op, MatrixFn fn,
                                       double exponent = 1.0) {
  if (!op.is_hermitian()) throw Error("matrix_function: operator not Hermitian");
  const auto es = hermitian_eigensystem(op.matrix());
  const double lo = es.values.minCoeff();
  const double hi = es.values.maxCoeff();
  switch (fn) {
    case MatrixFn::Exp:
      if (std::max(std::abs(lo), std::abs(hi)) > 700.0)
        throw OverflowRisk("matrix_function: exp of spectrum beyond +-700");
      return {op.volume(), op.site(), hermitian_apply(es, [](double x) { return std::exp(x); })};
    case MatrixFn::Log:
      if (lo <= kFaithfulFloor)
        throw NonPositiveSpectrum("matrix_function: log needs strictly positive spectrum, min " +
                                  std::to_string(lo));
      return {op.volume(), op.site(), hermitian_apply(es, [](double x) { return std::log(x); })};
    case MatrixFn::Power: {
      const bool integral = std::abs(exponent - std::round(exponent)) == 0.0;
      if (!integral && lo <= kFaithfulFloor)
        throw NonPositiveSpectrum(
            "matrix_function: fractional power needs strictly positive spectrum");
      if (integral && exponent < 0 && std::abs(lo) <= kFaithfulFloor && std::abs(hi) <= kFaithfulFloor)
        throw NonPositiveSpectrum("matrix_function: inverse of numerically zero operator");
      return {op.volume(), op.site(),
              hermitian_apply(es, [exponent](double x) { return std::pow(x, exponent); })};
    }
  }
  throw Error("matrix_function: unknown tag");
}

// Unit-trace positive semidefinite operator with its eigensystem cached at
// construction. Eigenvalues are stored descending; tiny negative values down
// to -1e-12 are clamped to zero, anything lower is rejected.
class DensityMatrix {
 public:
  static DensityMatrix from_operator(const LatticeOperator& op) {
    if (!op.is_hermitian()) throw Error("DensityMatrix: matrix not Hermitian");
    const double tr = op.matrix().trace().real();
    if (std::abs(tr - 1.0) > kTraceOneTol)
      throw Error("DensityMatrix: trace " + std::to_string(tr) + " not 1");
    auto es = hermitian_eigensystem(op.matrix());
    RVector vals = es.values.reverse();
    CMatrix vecs = es.vectors.rowwise().reverse();
    clamp_spectrum(vals);
    const double recon = (vecs * vals.asDiagonal() * vecs.adjoint() - op.matrix()).norm();
    if (recon > kEigenReconTol)
      throw Error("DensityMatrix: eigensystem reconstruction off by " + std::to_string(recon));
    return DensityMatrix(op, std::move(vals), std::move(vecs));
  }

  // Trusted spectral path: eigenvalues descending, columns of `vectors`
  // matching. The operator matrix is reconstructed from the pair.
  static DensityMatrix from_eigensystem(const Volume& vol, const SiteSpace& site, RVector values,
                                        CMatrix vectors) {
    if (values.size() != vectors.cols() || vectors.rows() != vectors.cols())
      throw Error("DensityMatrix: eigensystem shape mismatch");
    for (Eigen::Index i = 1; i < values.size(); ++i)
      if (values(i) > values(i - 1) + 1e-12)
        throw Error("DensityMatrix: eigenvalues not descending");
    clamp_spectrum(values);
    const double sum = values.sum();
    if (std::abs(sum - 1.0) > kTraceOneTol)
      throw Error("DensityMatrix: eigenvalue sum " + std::to_string(sum) + " not 1");
    const double unit = (vectors.adjoint() * vectors - CMatrix::Identity(vectors.cols(), vectors.cols())).norm();
    if (unit > 1e-9) throw Error("DensityMatrix: eigenvector matrix not unitary");
    CMatrix m = vectors * values.asDiagonal() * vectors.adjoint();
    m = 0.5 * (m + m.adjoint().eval());
    return DensityMatrix(LatticeOperator(vol, site, std::move(m)), std::move(values),
                         std::move(vectors));
  }

  const LatticeOperator& op() const { return op_; }
  const Volume& volume() const { return op_.volume(); }
  const SiteSpace& site() const { return op_.site(); }
  const CMatrix& matrix() const { return op_.matrix(); }
  long dim() const { return op_.dim(); }

  // Descending, clamped to [0, 1].
  const RVector& eigenvalues() const { return eigenvalues_; }
  const CMatrix& eigenvectors() const { return eigenvectors_; }

  double min_eigenvalue() const { return eigenvalues_(eigenvalues_.size() - 1); }
  bool is_faithful() const { return min_eigenvalue() > kFaithfulFloor; }

 private:
  DensityMatrix(LatticeOperator op, RVector vals, CMatrix vecs)
      : op_(std::move(op)), eigenvalues_(std::move(vals)), eigenvectors_(std::move(vecs)) {}

  static void clamp_spectrum(RVector& vals) {
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
      if (vals(i) < kPsdFloor)
        throw Error("DensityMatrix: negative eigenvalue " + std::to_string(vals(i)));
      if (vals(i) < 0) vals(i) = 0.0;
    }
  }

  LatticeOperator op_;
  RVector eigenvalues_;
  CMatrix eigenvectors_;
};

// Reduced state on `keep`; the result is re-diagonalized at construction.
inline DensityMatrix partial_trace(const DensityMatrix& rho, const Volume& keep) {
  CMatrix red = partial_trace_matrix(rho.matrix(), rho.volume(), keep, rho.site());
  red = 0.5 * (red + red.adjoint().eval());
  return DensityMatrix::from_operator(LatticeOperator(keep, rho.site(), std::move(red)));
}

// Tr(rho A) for Hermitian A on the same volume.
inline double expectation(const DensityMatrix& rho, const LatticeOperator& a) {
  require_same_space(rho.op(), a, "expectation");
  return rho.matrix().cwiseProduct(a.matrix().transpose()).sum().real();
}

// (1/2)||rho - sigma||_1.
inline double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  require_same_space(rho.op(), sigma.op(), "trace_distance");
  return 0.5 * trace_norm(rho.matrix() - sigma.matrix(), true);
}

}  // namespace lattherm
