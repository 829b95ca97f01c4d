#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lattherm/operators.hpp"

namespace lattherm {

// A finite subset of Z^d in normal form: sites sorted lexicographically and
// translated so the lexicographically smallest site is the origin. One shape
// stands for all of its lattice translates.
struct SubsetShape {
  std::vector<Point> points;

  static SubsetShape normalized(std::vector<Point> pts) {
    if (pts.empty()) throw Error("SubsetShape: empty subset");
    const size_t arity = pts[0].size();
    for (const auto& p : pts)
      if (p.size() != arity) throw Error("SubsetShape: mixed point arity");
    std::sort(pts.begin(), pts.end());
    if (std::adjacent_find(pts.begin(), pts.end()) != pts.end())
      throw Error("SubsetShape: duplicate site");
    const Point base = pts.front();
    for (auto& p : pts) p = point_sub(p, base);
    return SubsetShape{std::move(pts)};
  }

  int dimension() const { return static_cast<int>(points[0].size()); }
  long size() const { return static_cast<long>(points.size()); }

  Point min_corner() const {
    Point m = points[0];
    for (const auto& p : points)
      for (size_t ax = 0; ax < m.size(); ++ax) m[ax] = std::min(m[ax], p[ax]);
    return m;
  }

  Point max_corner() const {
    Point m = points[0];
    for (const auto& p : points)
      for (size_t ax = 0; ax < m.size(); ++ax) m[ax] = std::max(m[ax], p[ax]);
    return m;
  }

  // Largest pairwise l1 distance; the interaction range bookkeeping metric.
  // Any shape of diameter m fits in a box of side m+1 per axis.
  int diameter() const {
    int d = 0;
    for (const auto& p : points)
      for (const auto& q : points) {
        int s = 0;
        for (size_t ax = 0; ax < p.size(); ++ax) s += std::abs(p[ax] - q[ax]);
        d = std::max(d, s);
      }
    return d;
  }

  std::string to_string() const {
    std::string s = "{";
    for (size_t i = 0; i < points.size(); ++i) {
      if (i) s += ",";
      s += point_string(points[i]);
    }
    return s + "}";
  }

  friend bool operator<(const SubsetShape& a, const SubsetShape& b) { return a.points < b.points; }
  friend bool operator==(const SubsetShape& a, const SubsetShape& b) {
    return a.points == b.points;
  }
};

// Translation-invariant interaction: one Hermitian matrix per subset shape,
// implicitly repeated at every lattice translate. Matrices are stored in the
// tensor order of the shape's sorted sites.
class Interaction {
 public:
  Interaction(SiteSpace site, int dimension)
      : site_(site), dimension_(dimension) {
    if (dimension < 1) throw Error("Interaction: lattice dimension must be >= 1");
  }

  // Adds (accumulates) a term. `subset` is any translate of the shape; the
  // matrix must match the subset's sorted tensor order and be Hermitian.
  void add(const std::vector<Point>& subset, const CMatrix& m, double herm_tol = 1e-12) {
    auto shape = SubsetShape::normalized(subset);
    if (shape.dimension() != dimension_)
      throw Error("Interaction: term arity does not match lattice dimension");
    if (!std::is_sorted(subset.begin(), subset.end()))
      throw Error("Interaction: subset sites must be sorted");
    long want = 1;
    for (long i = 0; i < shape.size(); ++i) want *= site_.dim;
    if (m.rows() != want || m.cols() != want)
      throw Error("Interaction: term matrix is " + std::to_string(m.rows()) + "x" +
                  std::to_string(m.cols()) + ", expected " + std::to_string(want) + " for " +
                  shape.to_string());
    if (!is_hermitian(m, herm_tol))
      throw Error("Interaction: term on " + shape.to_string() + " not Hermitian");
    auto it = terms_.find(shape);
    if (it == terms_.end())
      terms_.emplace(std::move(shape), m);
    else
      it->second += m;
  }

  const SiteSpace& site() const { return site_; }
  int dimension() const { return dimension_; }
  const std::map<SubsetShape, CMatrix>& terms() const { return terms_; }

  // Maximum shape diameter over stored terms.
  int range() const {
    int r = 0;
    for (const auto& [shape, m] : terms_) r = std::max(r, shape.diameter());
    return r;
  }

  bool empty() const { return terms_.empty(); }

  // Removes terms whose matrices cancelled exactly.
  void prune() {
    for (auto it = terms_.begin(); it != terms_.end();)
      it = (it->second.norm() == 0.0) ? terms_.erase(it) : std::next(it);
  }

  friend Interaction operator+(const Interaction& a, const Interaction& b) {
    if (a.site_ != b.site_ || a.dimension_ != b.dimension_)
      throw VolumeMismatch("Interaction: incompatible site spaces or dimensions");
    Interaction out = a;
    for (const auto& [shape, m] : b.terms_) {
      auto it = out.terms_.find(shape);
      if (it == out.terms_.end())
        out.terms_.emplace(shape, m);
      else
        it->second += m;
    }
    out.prune();
    return out;
  }

  friend Interaction operator-(const Interaction& a, const Interaction& b) {
    return a + (-1.0) * b;
  }

  friend Interaction operator*(double c, const Interaction& a) {
    Interaction out = a;
    for (auto& [shape, m] : out.terms_) m *= c;
    if (c == 0.0) out.terms_.clear();
    return out;
  }

 private:
  SiteSpace site_;
  int dimension_;
  std::map<SubsetShape, CMatrix> terms_;
};

// Built-in spin-1/2 chain families. Zero couplings are not stored, so the
// reported range reflects the couplings actually present.

// J sigma^z sigma^z on nearest-neighbor bonds plus transverse field h sigma^x.
// In d > 1 the bond runs along every coordinate axis.
inline Interaction ising_transverse(double J, double h, int dimension = 1) {
  Interaction phi{SiteSpace(2), dimension};
  if (h != 0.0) phi.add({Point(static_cast<size_t>(dimension), 0)}, h * pauli_x());
  if (J != 0.0) {
    const CMatrix zz = kron(pauli_z(), pauli_z());
    for (int ax = 0; ax < dimension; ++ax) {
      Point e(static_cast<size_t>(dimension), 0);
      e[static_cast<size_t>(ax)] = 1;
      phi.add({Point(static_cast<size_t>(dimension), 0), e}, J * zz);
    }
  }
  return phi;
}

// (J(1+g)/2) XX + (J(1-g)/2) YY bonds with longitudinal field h sigma^z.
inline Interaction xy_chain(double J, double g, double h) {
  Interaction phi{SiteSpace(2), 1};
  if (h != 0.0) phi.add({{0}}, h * pauli_z());
  CMatrix bond = 0.5 * J * (1 + g) * kron(pauli_x(), pauli_x()) +
                 0.5 * J * (1 - g) * kron(pauli_y(), pauli_y());
  if (bond.norm() != 0.0) phi.add({{0}, {1}}, bond);
  return phi;
}

// J(XX + YY) + delta ZZ bonds with field h sigma^z.
inline Interaction xxz_chain(double J, double delta, double h) {
  Interaction phi{SiteSpace(2), 1};
  if (h != 0.0) phi.add({{0}}, h * pauli_z());
  CMatrix bond = J * (kron(pauli_x(), pauli_x()) + kron(pauli_y(), pauli_y())) +
                 delta * kron(pauli_z(), pauli_z());
  if (bond.norm() != 0.0) phi.add({{0}, {1}}, bond);
  return phi;
}

inline Interaction heisenberg_chain(double J, double h) { return xxz_chain(J, J, h); }

// Pure onsite field hx sigma^x + hy sigma^y + hz sigma^z.
inline Interaction onsite_field(double hx, double hy, double hz, int dimension = 1) {
  Interaction phi{SiteSpace(2), dimension};
  CMatrix m = hx * pauli_x() + hy * pauli_y() + hz * pauli_z();
  if (m.norm() != 0.0) phi.add({Point(static_cast<size_t>(dimension), 0)}, m);
  return phi;
}

// phi plus c times the identity at every site; physically equivalent to phi.
inline Interaction with_identity_shift(const Interaction& phi, double c) {
  Interaction out = phi;
  if (c != 0.0)
    out.add({Point(static_cast<size_t>(phi.dimension()), 0)},
            c * CMatrix::Identity(phi.site().dim, phi.site().dim));
  return out;
}

}  // namespace lattherm
