#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "lattherm/sites.hpp"

namespace lattherm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}

inline Eigen::Matrix2cd pauli_y() {
  Eigen::Matrix2cd m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Eigen::Matrix2cd pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}

// E_ij in a dim-dimensional site space.
inline CMatrix matrix_unit(int dim, int i, int j) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(i, j) = 1.0;
  return m;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = 1e-12) {
  const double scale = std::max(1.0, m.norm());
  return (m - m.adjoint()).norm() <= tol * scale;
}

// Kronecker product in the site enumeration order (first factor most
// significant). Plain loops; Eigen handles the rest.
template <typename DerivedA, typename DerivedB>
CMatrix kron(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace detail {

// Basis-index weights of selected site positions inside a volume of size
// total, local dimension d: weight of position k is d^(total-1-k).
inline std::vector<long> position_strides(const std::vector<long>& positions, long total, int d) {
  std::vector<long> strides(positions.size());
  for (size_t j = 0; j < positions.size(); ++j) {
    long s = 1;
    for (long k = positions[j] + 1; k < total; ++k) s *= d;
    strides[j] = s;
  }
  return strides;
}

// For every assignment of base-d digits to the given positions, the summed
// contribution to the full basis index, enumerated in digit order.
inline std::vector<long> index_offsets(const std::vector<long>& positions, long total, int d) {
  const auto strides = position_strides(positions, total, d);
  long count = 1;
  for (size_t j = 0; j < positions.size(); ++j) count *= d;
  std::vector<long> offsets(static_cast<size_t>(count), 0);
  for (long a = 0; a < count; ++a) {
    long rem = a, off = 0;
    for (size_t j = positions.size(); j-- > 0;) {
      off += (rem % d) * strides[j];
      rem /= d;
    }
    offsets[static_cast<size_t>(a)] = off;
  }
  return offsets;
}

}  // namespace detail

// Extend a local matrix on `support` by identity to the whole volume.
// Support sites must be listed in sorted order; the local matrix's tensor
// factors follow that order.
inline CMatrix embed_matrix(const CMatrix& local, const std::vector<Point>& support,
                            const Volume& vol, const SiteSpace& site) {
  if (support.empty()) throw SupportNotContained("embed: empty support");
  if (!std::is_sorted(support.begin(), support.end()))
    throw Error("embed: support sites must be sorted");
  if (std::adjacent_find(support.begin(), support.end()) != support.end())
    throw Error("embed: duplicate support site");

  const int d = site.dim;
  long local_dim = 1;
  for (size_t j = 0; j < support.size(); ++j) local_dim *= d;
  if (local.rows() != local_dim || local.cols() != local_dim)
    throw Error("embed: local matrix is " + std::to_string(local.rows()) + "x" +
                std::to_string(local.cols()) + ", expected " + std::to_string(local_dim));

  std::vector<long> spos;
  for (const auto& p : support) spos.push_back(vol.index_of(p));

  std::vector<long> rpos;
  for (long k = 0; k < vol.size(); ++k)
    if (std::find(spos.begin(), spos.end(), k) == spos.end()) rpos.push_back(k);

  const auto soff = detail::index_offsets(spos, vol.size(), d);
  const auto roff = detail::index_offsets(rpos, vol.size(), d);

  long full_dim = 1;
  for (long k = 0; k < vol.size(); ++k) full_dim *= d;
  CMatrix out = CMatrix::Zero(full_dim, full_dim);
  for (long base : roff)
    for (long a = 0; a < local_dim; ++a)
      for (long b = 0; b < local_dim; ++b)
        out(base + soff[static_cast<size_t>(a)], base + soff[static_cast<size_t>(b)]) += local(a, b);
  return out;
}

// Trace out every site of `vol` not in `keep`.
inline CMatrix partial_trace_matrix(const CMatrix& full, const Volume& vol, const Volume& keep,
                                    const SiteSpace& site) {
  if (!keep.subset_of(vol))
    throw SupportNotContained("partial_trace: keep region not contained in volume");
  const int d = site.dim;

  std::vector<long> kpos;
  for (const auto& p : keep.sites()) kpos.push_back(vol.index_of(p));
  std::vector<long> rpos;
  for (long k = 0; k < vol.size(); ++k)
    if (std::find(kpos.begin(), kpos.end(), k) == kpos.end()) rpos.push_back(k);

  const auto koff = detail::index_offsets(kpos, vol.size(), d);
  const auto roff = detail::index_offsets(rpos, vol.size(), d);

  long keep_dim = 1;
  for (size_t j = 0; j < kpos.size(); ++j) keep_dim *= d;
  if (full.rows() != full.cols()) throw Error("partial_trace: matrix not square");
  long full_dim = 1;
  for (long k = 0; k < vol.size(); ++k) full_dim *= d;
  if (full.rows() != full_dim) throw Error("partial_trace: matrix does not match volume");

  CMatrix out = CMatrix::Zero(keep_dim, keep_dim);
  for (long base : roff)
    for (long a = 0; a < keep_dim; ++a)
      for (long b = 0; b < keep_dim; ++b)
        out(a, b) += full(base + koff[static_cast<size_t>(a)], base + koff[static_cast<size_t>(b)]);
  return out;
}

}  // namespace lattherm
