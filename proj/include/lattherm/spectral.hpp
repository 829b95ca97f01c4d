#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <utility>

#include "lattherm/local_algebra.hpp"

namespace lattherm {

// Eigensystem of a Hermitian matrix, eigenvalues ascending.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};

inline HermitianEigen hermitian_eigensystem(const CMatrix& m, double herm_tol = 1e-12) {
  if (!is_hermitian(m, herm_tol)) throw Error("hermitian_eigensystem: matrix not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
  if (es.info() != Eigen::Success) throw Error("hermitian_eigensystem: eigensolver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

// f applied to the spectrum: U f(D) U^*.
template <typename F>
CMatrix hermitian_apply(const HermitianEigen& es, F&& f) {
  RVector fe(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) fe(i) = f(es.values(i));
  return es.vectors * fe.asDiagonal() * es.vectors.adjoint();
}

template <typename F>
CMatrix hermitian_apply(const CMatrix& m, F&& f) {
  return hermitian_apply(hermitian_eigensystem(m), std::forward<F>(f));
}

// Largest singular value. Hermitian matrices use the spectrum directly.
inline double spectral_norm(const CMatrix& m, bool assume_hermitian = false) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (assume_hermitian || is_hermitian(m)) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

// Sum of singular values; for Hermitian input the absolute eigenvalue sum.
inline double trace_norm(const CMatrix& m, bool assume_hermitian = false) {
  if (assume_hermitian || is_hermitian(m)) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues().sum();
}

}  // namespace lattherm
