#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "lattherm/errors.hpp"

namespace lattherm {

// One lattice point of Z^d. Lexicographic vector order doubles as site order.
using Point = std::vector<int>;

inline constexpr long kDefaultDimCap = 4096;

struct SiteSpace {
  int dim;

  explicit SiteSpace(int local_dim = 2) : dim(local_dim) {
    if (local_dim < 2) throw Error("SiteSpace: local dimension must be >= 2");
  }
  friend bool operator==(const SiteSpace& a, const SiteSpace& b) { return a.dim == b.dim; }
  friend bool operator!=(const SiteSpace& a, const SiteSpace& b) { return !(a == b); }
};

inline Point point_add(const Point& a, const Point& b) {
  Point r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Point point_sub(const Point& a, const Point& b) {
  Point r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline std::string point_string(const Point& p) {
  std::string s = "(";
  for (size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

// Finite region of Z^d with a fixed site enumeration (lexicographic).
// The enumeration order is the tensor-factor order of every operator on the
// volume: the first site is the most significant digit of the basis index,
// the last site varies fastest.
class Volume {
 public:
  // Cube of side L centered at the origin: coordinates in
  // [-floor(L/2), ceil(L/2) - 1] along every axis.
  static Volume cube(int dimension, int side) {
    if (dimension < 1) throw Error("Volume: lattice dimension must be >= 1");
    if (side < 1) throw Error("Volume: side must be >= 1");
    const int lo = -(side / 2);
    const int hi = lo + side - 1;
    std::vector<Point> pts;
    Point cur(static_cast<size_t>(dimension), lo);
    for (;;) {
      pts.push_back(cur);
      int axis = dimension - 1;
      while (axis >= 0) {
        if (cur[axis] < hi) {
          ++cur[axis];
          break;
        }
        cur[axis] = lo;
        --axis;
      }
      if (axis < 0) break;
    }
    Volume v(dimension, std::move(pts));
    v.side_ = side;
    return v;
  }

  // Axis-aligned box [lo, hi] (inclusive corners).
  static Volume box(const Point& lo, const Point& hi) {
    const int dimension = static_cast<int>(lo.size());
    if (dimension < 1 || hi.size() != lo.size()) throw Error("Volume: bad box corners");
    for (int ax = 0; ax < dimension; ++ax)
      if (hi[ax] < lo[ax]) throw Error("Volume: empty box");
    std::vector<Point> pts;
    Point cur = lo;
    for (;;) {
      pts.push_back(cur);
      int axis = dimension - 1;
      while (axis >= 0) {
        if (cur[axis] < hi[axis]) {
          ++cur[axis];
          break;
        }
        cur[axis] = lo[axis];
        --axis;
      }
      if (axis < 0) break;
    }
    return Volume(dimension, std::move(pts));
  }

  // Arbitrary finite region; sites are sorted and must be distinct.
  static Volume from_sites(int dimension, std::vector<Point> sites) {
    if (dimension < 1) throw Error("Volume: lattice dimension must be >= 1");
    if (sites.empty()) throw Error("Volume: empty site set");
    for (const auto& p : sites)
      if (static_cast<int>(p.size()) != dimension)
        throw Error("Volume: point arity does not match lattice dimension");
    std::sort(sites.begin(), sites.end());
    if (std::adjacent_find(sites.begin(), sites.end()) != sites.end())
      throw Error("Volume: duplicate site");
    return Volume(dimension, std::move(sites));
  }

  int dimension() const { return dimension_; }
  long size() const { return static_cast<long>(sites_.size()); }
  const std::vector<Point>& sites() const { return sites_; }

  // Side length if this volume was built as a cube, 0 otherwise.
  int side() const { return side_; }

  bool contains(const Point& p) const { return index_.count(p) != 0; }

  long index_of(const Point& p) const {
    auto it = index_.find(p);
    if (it == index_.end())
      throw SupportNotContained("Volume: site " + point_string(p) + " not in volume");
    return it->second;
  }

  bool subset_of(const Volume& other) const {
    for (const auto& p : sites_)
      if (!other.contains(p)) return false;
    return true;
  }

  Point min_corner() const {
    Point m(static_cast<size_t>(dimension_), 0);
    for (int ax = 0; ax < dimension_; ++ax) {
      int v = sites_[0][ax];
      for (const auto& p : sites_) v = std::min(v, p[ax]);
      m[ax] = v;
    }
    return m;
  }

  Point max_corner() const {
    Point m(static_cast<size_t>(dimension_), 0);
    for (int ax = 0; ax < dimension_; ++ax) {
      int v = sites_[0][ax];
      for (const auto& p : sites_) v = std::max(v, p[ax]);
      m[ax] = v;
    }
    return m;
  }

  Volume shifted(const Point& by) const {
    std::vector<Point> pts;
    pts.reserve(sites_.size());
    for (const auto& p : sites_) pts.push_back(point_add(p, by));
    Volume v(dimension_, std::move(pts));
    v.side_ = side_;
    return v;
  }

  friend bool operator==(const Volume& a, const Volume& b) {
    return a.dimension_ == b.dimension_ && a.sites_ == b.sites_;
  }
  friend bool operator!=(const Volume& a, const Volume& b) { return !(a == b); }

 private:
  Volume(int dimension, std::vector<Point> sites)
      : dimension_(dimension), sites_(std::move(sites)) {
    for (long i = 0; i < static_cast<long>(sites_.size()); ++i) index_[sites_[i]] = i;
  }

  int dimension_;
  int side_ = 0;
  std::vector<Point> sites_;
  std::map<Point, long> index_;
};

// Sites of a that are not in b.
inline Volume set_difference(const Volume& a, const Volume& b) {
  std::vector<Point> pts;
  for (const auto& p : a.sites())
    if (!b.contains(p)) pts.push_back(p);
  if (pts.empty()) throw Error("set_difference: empty result");
  return Volume::from_sites(a.dimension(), std::move(pts));
}

// dim^{|vol|} with an overflow/cap guard.
inline long state_dim(const Volume& vol, const SiteSpace& site, long cap = kDefaultDimCap) {
  long d = 1;
  for (long i = 0; i < vol.size(); ++i) {
    if (d > cap / site.dim)
      throw VolumeTooLarge("state dimension " + std::to_string(site.dim) + "^" +
                           std::to_string(vol.size()) + " exceeds cap " + std::to_string(cap));
    d *= site.dim;
  }
  return d;
}

}  // namespace lattherm
