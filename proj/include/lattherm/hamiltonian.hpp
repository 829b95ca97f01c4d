#pragma once

#include "lattherm/interaction.hpp"

namespace lattherm {

// All lattice translates t of a shape with shape + t contained in vol.
// Works for arbitrary (possibly non-box) volumes.
inline std::vector<Point> translates_within(const SubsetShape& shape, const Volume& vol) {
  const int d = vol.dimension();
  if (shape.dimension() != d)
    throw VolumeMismatch("translates_within: shape and volume dimensions differ");
  const Point vlo = vol.min_corner(), vhi = vol.max_corner();
  const Point slo = shape.min_corner(), shi = shape.max_corner();
  Point tlo(static_cast<size_t>(d)), thi(static_cast<size_t>(d));
  for (int ax = 0; ax < d; ++ax) {
    tlo[ax] = vlo[ax] - slo[ax];
    thi[ax] = vhi[ax] - shi[ax];
    if (thi[ax] < tlo[ax]) return {};
  }
  std::vector<Point> out;
  Point t = tlo;
  for (;;) {
    bool inside = true;
    for (const auto& p : shape.points)
      if (!vol.contains(point_add(p, t))) {
        inside = false;
        break;
      }
    if (inside) out.push_back(t);
    int axis = d - 1;
    while (axis >= 0) {
      if (t[axis] < thi[axis]) {
        ++t[axis];
        break;
      }
      t[axis] = tlo[axis];
      --axis;
    }
    if (axis < 0) break;
  }
  return out;
}

// Interaction norm sum_{X owns 0} e^{r(|X|-1)} |Phi(X)|_op. Each stored shape
// has exactly |X| translates through the origin, one per point of X.
inline double interaction_norm(const Interaction& phi, double r) {
  if (r <= 0.0) throw Error("interaction_norm: r must be positive");
  double total = 0.0;
  for (const auto& [shape, m] : phi.terms()) {
    const double n = static_cast<double>(shape.size());
    total += n * std::exp(r * (n - 1.0)) * spectral_norm(m, true);
  }
  return total;
}

// H_vol = sum of all translated terms fully contained in vol (open boundary).
inline LatticeOperator local_hamiltonian(const Interaction& phi, const Volume& vol,
                                         long cap = kDefaultDimCap) {
  const long dim = state_dim(vol, phi.site(), cap);
  CMatrix h = CMatrix::Zero(dim, dim);
  for (const auto& [shape, m] : phi.terms())
    for (const auto& t : translates_within(shape, vol)) {
      std::vector<Point> support;
      support.reserve(shape.points.size());
      for (const auto& p : shape.points) support.push_back(point_add(p, t));
      std::sort(support.begin(), support.end());
      h += embed_matrix(m, support, vol, phi.site());
    }
  return LatticeOperator(vol, phi.site(), std::move(h));
}

// Terms meeting both vol and its complement within ambient. The ambient must
// leave a margin of at least the interaction range around vol on every axis,
// otherwise crossing terms would be silently truncated.
inline LatticeOperator surface_energy(const Interaction& phi, const Volume& vol,
                                      const Volume& ambient, long cap = kDefaultDimCap) {
  if (!vol.subset_of(ambient))
    throw VolumeMismatch("surface_energy: vol is not contained in ambient");
  const int m = phi.range();
  const Point vlo = vol.min_corner(), vhi = vol.max_corner();
  const Point alo = ambient.min_corner(), ahi = ambient.max_corner();
  for (int ax = 0; ax < vol.dimension(); ++ax)
    if (vlo[ax] - alo[ax] < m || ahi[ax] - vhi[ax] < m)
      throw MarginTooSmall("surface_energy: ambient margin below interaction range " +
                           std::to_string(m));
  const long dim = state_dim(ambient, phi.site(), cap);
  CMatrix w = CMatrix::Zero(dim, dim);
  for (const auto& [shape, term] : phi.terms())
    for (const auto& t : translates_within(shape, ambient)) {
      std::vector<Point> support;
      support.reserve(shape.points.size());
      bool meets_vol = false, meets_rest = false;
      for (const auto& p : shape.points) {
        Point s = point_add(p, t);
        (vol.contains(s) ? meets_vol : meets_rest) = true;
        support.push_back(std::move(s));
      }
      if (!(meets_vol && meets_rest)) continue;
      std::sort(support.begin(), support.end());
      w += embed_matrix(term, support, ambient, phi.site());
    }
  return LatticeOperator(ambient, phi.site(), std::move(w));
}

// Support of the specific energy observable: union of all translated shapes
// through the origin.
inline Volume energy_observable_support(const Interaction& phi) {
  std::vector<Point> pts;
  for (const auto& [shape, m] : phi.terms())
    for (const auto& anchor : shape.points)
      for (const auto& p : shape.points) pts.push_back(point_sub(p, anchor));
  if (pts.empty()) pts.push_back(Point(static_cast<size_t>(phi.dimension()), 0));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return Volume::from_sites(phi.dimension(), std::move(pts));
}

// E_phi = sum_{X owns 0} Phi(X)/|X| on its minimal support around the origin.
// Its translates tile the lattice: summing them over a volume recovers the
// Hamiltonian up to boundary terms.
inline LatticeOperator specific_energy_observable(const Interaction& phi,
                                                  long cap = kDefaultDimCap) {
  const Volume support = energy_observable_support(phi);
  const long dim = state_dim(support, phi.site(), cap);
  CMatrix e = CMatrix::Zero(dim, dim);
  for (const auto& [shape, term] : phi.terms()) {
    const double weight = 1.0 / static_cast<double>(shape.size());
    for (const auto& anchor : shape.points) {
      std::vector<Point> sup;
      sup.reserve(shape.points.size());
      for (const auto& p : shape.points) sup.push_back(point_sub(p, anchor));
      std::sort(sup.begin(), sup.end());
      e += embed_matrix(weight * term, sup, support, phi.site());
    }
  }
  return LatticeOperator(support, phi.site(), std::move(e));
}

}  // namespace lattherm
