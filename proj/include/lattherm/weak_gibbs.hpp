#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "lattherm/equivalence.hpp"
#include "lattherm/thermal.hpp"

namespace lattherm {

// ||W_vol|| computed on the minimal region touched by crossing terms, so the
// cost does not scale with any ambient volume.
inline double surface_norm(const Interaction& phi, const Volume& vol, long cap = kDefaultDimCap) {
  const int m = phi.range();
  Point lo = vol.min_corner(), hi = vol.max_corner();
  for (int ax = 0; ax < vol.dimension(); ++ax) {
    lo[ax] -= m;
    hi[ax] += m;
  }
  const Volume grown = Volume::box(lo, hi);
  std::vector<std::pair<const CMatrix*, std::vector<Point>>> crossing;
  std::vector<Point> shell_sites;
  for (const auto& [shape, term] : phi.terms())
    for (const auto& t : translates_within(shape, grown)) {
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
      shell_sites.insert(shell_sites.end(), support.begin(), support.end());
      crossing.emplace_back(&term, std::move(support));
    }
  if (crossing.empty()) return 0.0;
  std::sort(shell_sites.begin(), shell_sites.end());
  shell_sites.erase(std::unique(shell_sites.begin(), shell_sites.end()), shell_sites.end());
  const Volume shell = Volume::from_sites(vol.dimension(), std::move(shell_sites));
  const long dim = state_dim(shell, phi.site(), cap);
  CMatrix w = CMatrix::Zero(dim, dim);
  for (const auto& [term, support] : crossing)
    w += embed_matrix(*term, support, shell, phi.site());
  return spectral_norm(w, true);
}

// Per-volume state provider, the finite-size stand-in for one global state.
using StateFamily = std::function<DensityMatrix(const Volume&)>;

// Restriction of a single ambient Gibbs state to each requested window.
inline StateFamily restricted_gibbs_family(const Interaction& phi, const Volume& ambient,
                                           double beta = 1.0, long cap = kDefaultDimCap) {
  auto big = std::make_shared<DensityMatrix>(gibbs_state(phi, ambient, beta, cap));
  return [big](const Volume& vol) { return partial_trace(*big, vol); };
}

// Restriction of the Gibbs state on each window grown by a fixed margin. The
// margin must cover the interaction range, otherwise the restriction misses
// boundary terms entirely.
inline StateFamily grown_gibbs_family(const Interaction& phi, int margin, double beta = 1.0,
                                      long cap = kDefaultDimCap) {
  if (margin < phi.range())
    throw MarginTooSmall("grown_gibbs_family: margin below interaction range");
  return [phi, margin, beta, cap](const Volume& vol) {
    Point lo = vol.min_corner(), hi = vol.max_corner();
    for (int ax = 0; ax < vol.dimension(); ++ax) {
      lo[ax] -= margin;
      hi[ax] += margin;
    }
    return partial_trace(gibbs_state(phi, Volume::box(lo, hi), beta, cap), vol);
  };
}

// The exact finite-volume Gibbs state of phi itself; certificates against it
// are identically zero and pin the plumbing.
inline StateFamily exact_gibbs_family(const Interaction& phi, double beta = 1.0,
                                      long cap = kDefaultDimCap) {
  return [phi, beta, cap](const Volume& vol) { return gibbs_state(phi, vol, beta, cap); };
}

// Least-squares fit value = limit + slope / L.
struct ExtrapolationReport {
  double limit = 0;
  double slope = 0;
  double residual_rms = 0;
  bool monotone = false;
  long points = 0;
};

inline ExtrapolationReport extrapolate(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw TooFewPoints("extrapolate: need at least 3 volumes, got " +
                       std::to_string(points.size()));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(points.size());
  for (const auto& [l, y] : points) {
    if (l <= 0) throw Error("extrapolate: nonpositive volume label");
    const double x = 1.0 / l;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  if (det == 0) throw Error("extrapolate: degenerate volume labels");
  ExtrapolationReport rep;
  rep.points = points.size();
  rep.slope = (n * sxy - sx * sy) / det;
  rep.limit = (sy - rep.slope * sx) / n;
  double ss = 0;
  for (const auto& [l, y] : points) {
    const double r = y - (rep.limit + rep.slope / l);
    ss += r * r;
  }
  rep.residual_rms = std::sqrt(ss / n);
  bool up = true, down = true;
  for (size_t i = 1; i < points.size(); ++i) {
    up = up && points[i].second >= points[i - 1].second;
    down = down && points[i].second <= points[i - 1].second;
  }
  rep.monotone = up || down;
  return rep;
}

// One volume's worth of weak-Gibbs diagnostics for a state family against the
// finite-volume Gibbs states of phi.
struct WeakGibbsRecord {
  int side = 0;
  long sites = 0;
  double log_defect = 0;      // ||log omega - log omega^c||
  double log_diff_min = 0;    // min eigenvalue of log omega - log omega^c
  double log_diff_max = 0;    // max eigenvalue of log omega - log omega^c
  double ratio_floor = 0;     // min eigenvalue of the state-ratio pencil
  double ratio_ceiling = 0;   // max eigenvalue of the state-ratio pencil
  double entropy_defect = 0;  // inf over states of S(.|omega) - S(.|omega^c)
  double surface_bound = 0;   // 2||W_vol||, the Hiai-Petz log-ratio bound
};

struct WeakGibbsCertificate {
  std::vector<WeakGibbsRecord> records;
  // Fit of log_defect / sites against 1/L; absent below 3 volumes.
  std::optional<ExtrapolationReport> per_site_trend;
};

inline WeakGibbsCertificate weak_gibbs_certificate(const Interaction& phi,
                                                   const StateFamily& family,
                                                   const std::vector<Volume>& vols,
                                                   double beta = 1.0,
                                                   long cap = kDefaultDimCap) {
  WeakGibbsCertificate cert;
  std::vector<std::pair<double, double>> trend;
  for (const auto& vol : vols) {
    const DensityMatrix omega = family(vol);
    if (omega.volume() != vol)
      throw VolumeMismatch("weak_gibbs_certificate: family returned wrong volume");
    if (!omega.is_faithful())
      throw StateNotFaithful("weak_gibbs_certificate: state not faithful on " +
                             std::to_string(vol.size()) + " sites");
    const DensityMatrix ref = gibbs_state(phi, vol, beta, cap);

    const CMatrix log_omega = matrix_function(omega.op(), MatrixFn::Log).matrix();
    const CMatrix log_ref = matrix_function(ref.op(), MatrixFn::Log).matrix();
    const CMatrix diff = log_omega - log_ref;

    WeakGibbsRecord rec;
    rec.side = vol.side();
    rec.sites = vol.size();
    const auto des = hermitian_eigensystem(CMatrix(0.5 * (diff + diff.adjoint())));
    rec.log_diff_min = des.values.minCoeff();
    rec.log_diff_max = des.values.maxCoeff();
    rec.log_defect = std::max(std::abs(rec.log_diff_min), std::abs(rec.log_diff_max));
    rec.entropy_defect = -rec.log_diff_max;

    const CMatrix inv_sqrt = matrix_function(ref.op(), MatrixFn::Power, -0.5).matrix();
    const CMatrix pencil = inv_sqrt * omega.matrix() * inv_sqrt;
    const auto pes = hermitian_eigensystem(0.5 * (pencil + pencil.adjoint()));
    rec.ratio_floor = pes.values.minCoeff();
    rec.ratio_ceiling = pes.values.maxCoeff();

    rec.surface_bound = 2.0 * surface_norm(phi, vol, cap);
    cert.records.push_back(rec);

    const double l = rec.side > 0 ? rec.side : static_cast<double>(rec.sites);
    trend.emplace_back(l, rec.log_defect / static_cast<double>(rec.sites));
  }
  if (cert.records.size() >= 3) cert.per_site_trend = extrapolate(trend);
  return cert;
}

// Distance of S(nu|omega)/|vol| from its Gibbs-identity form
// -S(nu)/|vol| + beta tr(nu H)/|vol| + P/|vol|; identically zero when omega is
// the exact finite-volume Gibbs state.
inline std::vector<std::pair<long, double>> regularity_defect(
    const StateFamily& nu_family, const StateFamily& omega_family, const Interaction& phi,
    const std::vector<Volume>& vols, double beta = 1.0, long cap = kDefaultDimCap) {
  std::vector<std::pair<long, double>> out;
  for (const auto& vol : vols) {
    const DensityMatrix nu = nu_family(vol);
    const DensityMatrix omega = omega_family(vol);
    if (!omega.is_faithful())
      throw StateNotFaithful("regularity_defect: reference state not faithful");
    const double n = static_cast<double>(vol.size());
    const LatticeOperator h = local_hamiltonian(phi, vol, cap);
    const double lhs = relative_entropy(nu, omega) / n;
    const double rhs = (-von_neumann_entropy(nu) + beta * expectation(nu, h) +
                        pressure_of(h, beta)) /
                       n;
    out.emplace_back(vol.size(), std::abs(lhs - rhs));
  }
  return out;
}

}  // namespace lattherm
