#pragma once

#include <optional>

#include "lattherm/evolution.hpp"
#include "lattherm/hamiltonian.hpp"
#include "lattherm/weak_gibbs.hpp"

namespace lattherm {

// A quench: prepare the Gibbs state of psi on the ambient volume, drive with
// the Hamiltonian of phi, watch a centered window. The optional number
// interaction rides along for chains with a conserved density.
struct QuenchExperiment {
  Interaction psi{SiteSpace(2), 1};
  Interaction phi{SiteSpace(2), 1};
  std::optional<Interaction> number;
  long ambient_side = 8;
  long window_side = 4;
  double beta = 1.0;
  std::vector<double> times;     // instants for the conservation audit
  std::vector<double> horizons;  // Cesaro horizons
  long cap = kDefaultDimCap;
};

struct QuenchSeriesRow {
  double horizon;
  double e_psi;
  double e_phi;
  double entropy_density;
  std::optional<double> e_number;
};

struct QuenchReport {
  QuenchSeriesRow initial;  // horizon 0: the unevolved window restriction
  std::vector<QuenchSeriesRow> series;
  std::vector<DensityMatrix> time_window_states;
  std::vector<DensityMatrix> horizon_window_states;
};

struct AuditRow {
  double t;
  double global_energy, global_energy_drift;
  double global_entropy, global_entropy_drift;
  double window_energy_density, window_energy_drift;
  double window_entropy_density, window_entropy_drift;
  double surface_budget;
  std::optional<double> global_number, global_number_drift;
};

struct ConservationAudit {
  double window_surface_norm;
  std::vector<AuditRow> rows;
};

namespace detail {

inline void check_quench(const QuenchExperiment& exp) {
  if (exp.psi.dimension() != exp.phi.dimension())
    throw Error("quench: psi and phi live in different lattice dimensions");
  if (exp.psi.site().dim != exp.phi.site().dim)
    throw Error("quench: psi and phi have different site dimensions");
  long margin = std::max<long>(exp.psi.range(), exp.phi.range());
  if (exp.number) margin = std::max<long>(margin, exp.number->range());
  if (exp.window_side + 2 * margin > exp.ambient_side)
    throw MarginTooSmall("quench: window side " + std::to_string(exp.window_side) +
                         " plus margins exceeds ambient side " +
                         std::to_string(exp.ambient_side));
  for (std::size_t i = 1; i < exp.times.size(); ++i)
    if (!(exp.times[i] > exp.times[i - 1])) throw Error("quench: time grid not ascending");
  for (std::size_t i = 0; i < exp.horizons.size(); ++i)
    if (exp.horizons[i] <= 0.0 || (i > 0 && exp.horizons[i] <= exp.horizons[i - 1]))
      throw Error("quench: horizons must be positive and ascending");
}

// Positions x with supp(E) + x inside the window; one expectation per
// position, averaged. Interior placement keeps the estimate free of direct
// edge contact.
inline std::vector<Point> window_anchors(const LatticeOperator& e, const Volume& window) {
  std::vector<Point> anchors;
  const Volume& supp = e.volume();
  Point lo = window.min_corner(), hi = window.max_corner();
  Point slo = supp.min_corner(), shi = supp.max_corner();
  const std::size_t d = lo.size();
  Point x(d), from(d), to(d);
  for (std::size_t a = 0; a < d; ++a) {
    from[a] = lo[a] - slo[a];
    to[a] = hi[a] - shi[a];
    if (from[a] > to[a]) return {};
  }
  x = from;
  while (true) {
    bool fits = true;
    for (const Point& p : supp.sites()) {
      Point q(d);
      for (std::size_t a = 0; a < d; ++a) q[a] = p[a] + x[a];
      if (!window.contains(q)) {
        fits = false;
        break;
      }
    }
    if (fits) anchors.push_back(x);
    std::size_t a = 0;
    for (; a < d; ++a) {
      if (++x[a] <= to[a]) break;
      x[a] = from[a];
    }
    if (a == d) break;
  }
  return anchors;
}

inline double window_estimate(const DensityMatrix& sigma, const LatticeOperator& e,
                              const std::vector<Point>& anchors) {
  if (anchors.empty()) throw Error("quench: observable support does not fit in the window");
  double acc = 0;
  for (const Point& x : anchors) {
    LatticeOperator shifted(e.volume().shifted(x), e.site(), e.matrix());
    acc += expectation(sigma, embed(shifted, sigma.volume()));
  }
  return acc / static_cast<double>(anchors.size());
}

struct WindowObservable {
  LatticeOperator density;
  std::vector<Point> anchors;
};

inline WindowObservable make_window_observable(const Interaction& phi, const Volume& window,
                                               long cap) {
  WindowObservable out{specific_energy_observable(phi, cap), {}};
  out.anchors = window_anchors(out.density, window);
  if (out.anchors.empty())
    throw Error("quench: specific-energy support does not fit in the window");
  return out;
}

}  // namespace detail

inline QuenchReport run_quench(const QuenchExperiment& exp) {
  detail::check_quench(exp);
  const int dim = exp.phi.dimension();
  const Volume ambient = Volume::cube(dim, exp.ambient_side);
  const Volume window = Volume::cube(dim, exp.window_side);

  EvolutionContext ctx(local_hamiltonian(exp.phi, ambient, exp.cap));
  const DensityMatrix omega0 = gibbs_state(exp.psi, ambient, exp.beta, exp.cap);

  const auto obs_psi = detail::make_window_observable(exp.psi, window, exp.cap);
  const auto obs_phi = detail::make_window_observable(exp.phi, window, exp.cap);
  std::optional<detail::WindowObservable> obs_num;
  if (exp.number) obs_num = detail::make_window_observable(*exp.number, window, exp.cap);

  const double n_window = static_cast<double>(window.size());
  auto make_row = [&](double horizon, const DensityMatrix& sigma) {
    QuenchSeriesRow row;
    row.horizon = horizon;
    row.e_psi = detail::window_estimate(sigma, obs_psi.density, obs_psi.anchors);
    row.e_phi = detail::window_estimate(sigma, obs_phi.density, obs_phi.anchors);
    row.entropy_density = von_neumann_entropy(sigma) / n_window;
    if (obs_num)
      row.e_number = detail::window_estimate(sigma, obs_num->density, obs_num->anchors);
    return row;
  };

  QuenchReport report;
  report.initial = make_row(0.0, partial_trace(omega0, window));
  for (double t : exp.times)
    report.time_window_states.push_back(partial_trace(evolve_state(omega0, ctx, t), window));
  for (double big_t : exp.horizons) {
    DensityMatrix sigma = partial_trace(cesaro_average(omega0, ctx, big_t), window);
    report.series.push_back(make_row(big_t, sigma));
    report.horizon_window_states.push_back(std::move(sigma));
  }
  return report;
}

// Tracks the conserved quantities along the real-time orbit. Global energy and
// entropy are exactly invariant; window quantities drift within a boundary
// budget of order ||W||·t/|window|. Global entropy is recomputed from a fresh
// eigendecomposition at every instant, so the invariance is measured, not
// assumed.
inline ConservationAudit conservation_audit(const QuenchExperiment& exp) {
  detail::check_quench(exp);
  const int dim = exp.phi.dimension();
  const Volume ambient = Volume::cube(dim, exp.ambient_side);
  const Volume window = Volume::cube(dim, exp.window_side);

  EvolutionContext ctx(local_hamiltonian(exp.phi, ambient, exp.cap));
  const DensityMatrix omega0 = gibbs_state(exp.psi, ambient, exp.beta, exp.cap);
  const auto obs_phi = detail::make_window_observable(exp.phi, window, exp.cap);

  std::optional<LatticeOperator> number_op;
  if (exp.number) number_op = local_hamiltonian(*exp.number, ambient, exp.cap);

  ConservationAudit audit;
  audit.window_surface_norm = surface_norm(exp.phi, window, exp.cap);
  const double n_window = static_cast<double>(window.size());

  auto measure = [&](double t) {
    AuditRow row{};
    row.t = t;
    const DensityMatrix rho_t = t == 0.0 ? omega0 : evolve_state(omega0, ctx, t);
    row.global_energy = expectation(rho_t, ctx.hamiltonian());
    row.global_entropy = von_neumann_entropy(DensityMatrix::from_operator(rho_t.op()));
    const DensityMatrix sigma = partial_trace(rho_t, window);
    row.window_energy_density = detail::window_estimate(sigma, obs_phi.density, obs_phi.anchors);
    row.window_entropy_density = von_neumann_entropy(sigma) / n_window;
    row.surface_budget = 2.0 * audit.window_surface_norm * std::abs(t) / n_window;
    if (number_op) row.global_number = expectation(rho_t, *number_op);
    return row;
  };

  const AuditRow base = measure(0.0);
  for (double t : exp.times) {
    AuditRow row = measure(t);
    row.global_energy_drift = std::abs(row.global_energy - base.global_energy);
    row.global_entropy_drift = std::abs(row.global_entropy - base.global_entropy);
    row.window_energy_drift = std::abs(row.window_energy_density - base.window_energy_density);
    row.window_entropy_drift = std::abs(row.window_entropy_density - base.window_entropy_density);
    if (number_op)
      row.global_number_drift = std::abs(*row.global_number - *base.global_number);
    audit.rows.push_back(std::move(row));
  }
  return audit;
}

}  // namespace lattherm
