#include "lattherm/lab/runner.hpp"

#include <chrono>
#include <random>
#include <sstream>

#include "lattherm/equivalence.hpp"
#include "lattherm/lab/csv.hpp"
#include "lattherm/perturbation.hpp"
#include "lattherm/quench.hpp"
#include "lattherm/thermal.hpp"
#include "lattherm/weak_gibbs.hpp"

namespace lattherm::lab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Volume> cubes(int dimension, const std::vector<long>& sides) {
  std::vector<Volume> out;
  for (long side : sides) out.push_back(Volume::cube(dimension, static_cast<int>(side)));
  return out;
}

// mt19937_64 output is fully specified by the standard; deriving doubles from
// the raw bits keeps the stream identical across standard libraries.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double symmetric_draw(std::mt19937_64& rng) { return 2.0 * unit_draw(rng) - 1.0; }

CMatrix random_site_matrix(int d, double amplitude, std::mt19937_64& rng) {
  CMatrix m(d, d);
  for (int r = 0; r < d; ++r) {
    m(r, r) = Complex(amplitude * symmetric_draw(rng), 0.0);
    for (int c = r + 1; c < d; ++c) {
      m(r, c) = amplitude * Complex(symmetric_draw(rng), symmetric_draw(rng));
      m(c, r) = std::conj(m(r, c));
    }
  }
  return m;
}

std::string point_label(const Point& x) {
  std::ostringstream out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) out << ' ';
    out << x[i];
  }
  return out.str();
}

void quench_row(CsvWriter& csv, const QuenchSeriesRow& row, bool with_number) {
  std::vector<std::string> fields{csv_float(row.horizon), csv_float(row.e_psi),
                                  csv_float(row.e_phi), csv_float(row.entropy_density)};
  if (with_number) fields.push_back(csv_float(row.e_number.value_or(0.0)));
  csv.add_row(fields);
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                          long cap) {
  std::filesystem::create_directories(out_dir);
  const auto run_start = Clock::now();

  RunManifest m;
  m.kind = kind_name(cfg.kind);
  m.config_hash = cfg.hash;
  m.created_utc = utc_timestamp_now();

  std::vector<std::pair<std::string, CsvWriter>> files;
  auto timed = [&m](const std::string& name, auto&& fn) {
    const auto t0 = Clock::now();
    fn();
    m.op_wall_s.emplace_back(name, seconds_since(t0));
  };

  const int dim = cfg.interaction.dimension();

  switch (cfg.kind) {
    case ExperimentKind::kPressure: {
      CsvWriter csv({"side", "sites", "pressure_per_site", "entropy_per_site",
                     "energy_per_site"});
      for (const auto& vol : cubes(dim, cfg.sides))
        timed("pressure L=" + std::to_string(vol.side()), [&] {
          const ThermoPoint pt = thermo_point(cfg.interaction, vol, cfg.beta, cap);
          csv.add_row({std::to_string(pt.side), std::to_string(pt.sites),
                       csv_float(pt.pressure_per_site), csv_float(pt.entropy_per_site),
                       csv_float(pt.energy_per_site)});
        });
      files.emplace_back("pressure.csv", std::move(csv));
      break;
    }

    case ExperimentKind::kGibbs: {
      CsvWriter csv({"side", "sites", "entropy_per_site", "energy_per_site",
                     "min_eigenvalue"});
      for (const auto& vol : cubes(dim, cfg.sides))
        timed("gibbs L=" + std::to_string(vol.side()), [&] {
          const LatticeOperator h = local_hamiltonian(cfg.interaction, vol, cap);
          const DensityMatrix rho = gibbs_of(h, cfg.beta);
          const double n = static_cast<double>(vol.size());
          csv.add_row({std::to_string(vol.side()), std::to_string(vol.size()),
                       csv_float(von_neumann_entropy(rho) / n),
                       csv_float(expectation(rho, h) / n),
                       csv_float(rho.min_eigenvalue())});
        });
      files.emplace_back("gibbs.csv", std::move(csv));
      break;
    }

    case ExperimentKind::kWeakGibbs: {
      CsvWriter csv({"side", "sites", "log_defect", "defect_per_site", "log_diff_min",
                     "log_diff_max", "ratio_floor", "ratio_ceiling", "entropy_defect",
                     "surface_bound"});
      timed("certificate", [&] {
        const Volume ambient = Volume::cube(dim, static_cast<int>(cfg.ambient_side));
        const StateFamily family =
            restricted_gibbs_family(cfg.interaction, ambient, cfg.beta, cap);
        const WeakGibbsCertificate cert = weak_gibbs_certificate(
            cfg.interaction, family, cubes(dim, cfg.sides), cfg.beta, cap);
        for (const auto& rec : cert.records)
          csv.add_row({std::to_string(rec.side), std::to_string(rec.sites),
                       csv_float(rec.log_defect),
                       csv_float(rec.log_defect / static_cast<double>(rec.sites)),
                       csv_float(rec.log_diff_min), csv_float(rec.log_diff_max),
                       csv_float(rec.ratio_floor), csv_float(rec.ratio_ceiling),
                       csv_float(rec.entropy_defect), csv_float(rec.surface_bound)});
      });
      files.emplace_back("weakgibbs.csv", std::move(csv));
      break;
    }

    case ExperimentKind::kEquiv: {
      CsvWriter csv({"equivalent", "max_defect", "witness", "witness_defect"});
      CsvWriter density({"sites", "difference"});
      timed("verdict", [&] {
        const EquivalenceVerdict v =
            physically_equivalent(cfg.interaction, *cfg.other, 1e-10, cap);
        csv.add_row({v.equivalent ? "true" : "false", csv_float(v.max_defect), v.witness,
                     csv_float(v.witness_defect)});
      });
      timed("density", [&] {
        for (const auto& [sites, diff] : hamiltonian_density_difference(
                 cfg.interaction, *cfg.other, cubes(dim, cfg.sides), cap))
          density.add_row({std::to_string(sites), csv_float(diff)});
      });
      files.emplace_back("equiv.csv", std::move(csv));
      files.emplace_back("equiv_density.csv", std::move(density));
      break;
    }

    case ExperimentKind::kQuench:
    case ExperimentKind::kFermionQuench: {
      QuenchExperiment q;
      q.psi = *cfg.initial;
      q.phi = cfg.interaction;
      if (cfg.kind == ExperimentKind::kFermionQuench) q.number = number_interaction();
      q.ambient_side = cfg.ambient_side;
      q.window_side = cfg.window_side;
      q.beta = cfg.beta;
      q.times = cfg.times;
      q.horizons = cfg.horizons;
      q.cap = cap;

      const bool with_number = q.number.has_value();
      std::vector<std::string> header{"horizon", "e_psi", "e_phi", "entropy_density"};
      if (with_number) header.push_back("e_number");
      CsvWriter csv(header);
      timed("quench", [&] {
        const QuenchReport report = run_quench(q);
        quench_row(csv, report.initial, with_number);
        for (const auto& row : report.series) quench_row(csv, row, with_number);
      });
      files.emplace_back("quench.csv", std::move(csv));

      if (!q.times.empty()) {
        std::vector<std::string> ah{"t",
                                    "global_energy",
                                    "global_energy_drift",
                                    "global_entropy",
                                    "global_entropy_drift",
                                    "window_energy_density",
                                    "window_energy_drift",
                                    "window_entropy_density",
                                    "window_entropy_drift",
                                    "surface_budget"};
        if (with_number) {
          ah.push_back("global_number");
          ah.push_back("global_number_drift");
        }
        CsvWriter audit_csv(ah);
        timed("audit", [&] {
          const ConservationAudit audit = conservation_audit(q);
          for (const auto& row : audit.rows) {
            std::vector<std::string> fields{
                csv_float(row.t),
                csv_float(row.global_energy),
                csv_float(row.global_energy_drift),
                csv_float(row.global_entropy),
                csv_float(row.global_entropy_drift),
                csv_float(row.window_energy_density),
                csv_float(row.window_energy_drift),
                csv_float(row.window_entropy_density),
                csv_float(row.window_entropy_drift),
                csv_float(row.surface_budget)};
            if (with_number) {
              fields.push_back(csv_float(row.global_number.value_or(0.0)));
              fields.push_back(csv_float(row.global_number_drift.value_or(0.0)));
            }
            audit_csv.add_row(fields);
          }
        });
        files.emplace_back("quench_audit.csv", std::move(audit_csv));
      }
      break;
    }

    case ExperimentKind::kBounds: {
      CsvWriter csv({"index", "site", "amplitude", "upper_constant", "lower_constant",
                     "upper_margin", "lower_margin"});
      timed("bounds", [&] {
        const Volume vol = Volume::cube(dim, static_cast<int>(cfg.side));
        const LatticeOperator h = local_hamiltonian(cfg.interaction, vol, cap);
        std::mt19937_64 rng(cfg.seed);
        const int d = cfg.interaction.site().dim;
        for (long i = 0; i < cfg.count; ++i) {
          const Point x = vol.sites()[rng() % vol.sites().size()];
          const CMatrix local = random_site_matrix(d, cfg.amplitude, rng);
          const LatticeOperator v = embed(
              LatticeOperator(Volume::from_sites(dim, {x}), cfg.interaction.site(), local), vol);
          const SandwichBounds b = sandwich_bounds(h, v);
          csv.add_row({std::to_string(i), point_label(x), csv_float(cfg.amplitude),
                       csv_float(b.upper_constant), csv_float(b.lower_constant),
                       csv_float(b.upper_margin), csv_float(b.lower_margin)});
        }
      });
      files.emplace_back("bounds.csv", std::move(csv));
      break;
    }
  }

  for (auto& [name, csv] : files) {
    csv.write(out_dir / name);
    m.outputs.push_back(name);
  }
  m.total_wall_s = seconds_since(run_start);

  RunOutcome outcome;
  outcome.manifest_path = out_dir / "manifest.json";
  write_manifest(m, outcome.manifest_path);
  outcome.manifest = m;
  return outcome;
}

}  // namespace lattherm::lab
