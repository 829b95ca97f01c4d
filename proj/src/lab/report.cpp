#include "lattherm/lab/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "lattherm/lab/csv.hpp"
#include "lattherm/lab/manifest.hpp"
#include "lattherm/weak_gibbs.hpp"

namespace lattherm::lab {

namespace {

std::string short_float(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

// Report cells are re-rendered at 10 digits; the CSV keeps the full 17.
std::string pretty(const std::string& cell) {
  if (cell.empty()) return cell;
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end != cell.c_str() + cell.size()) return cell;
  if (cell.find_first_of(".eE") == std::string::npos) return cell;
  return short_float(v);
}

std::string render_table(const CsvTable& t) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back(t.header);
  for (const auto& row : t.rows) {
    std::vector<std::string> line;
    for (const auto& cell : row) line.push_back(pretty(cell));
    cells.push_back(line);
  }
  std::vector<std::size_t> width(t.header.size(), 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i)
      width[i] = std::max(width[i], row[i].size());
  std::ostringstream out;
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << "  ";
      out << std::string(width[i] - row[i].size(), ' ') << row[i];
    }
    out << '\n';
  }
  return out.str();
}

std::vector<std::pair<double, double>> fit_points(const CsvTable& t, const std::string& x_col,
                                                  const std::string& y_col) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t r = 0; r < t.rows.size(); ++r)
    pts.emplace_back(t.number(r, x_col), t.number(r, y_col));
  return pts;
}

void fit_section(std::ostringstream& out, const CsvTable& t, const std::string& x_col,
                 const std::string& y_col, const std::string& label) {
  if (t.rows.size() < 3) {
    out << label << ": needs at least 3 volumes for a fit\n";
    return;
  }
  const ExtrapolationReport fit = extrapolate(fit_points(t, x_col, y_col));
  out << label << ": limit " << short_float(fit.limit) << ", slope " << short_float(fit.slope)
      << ", residual rms " << short_float(fit.residual_rms)
      << (fit.monotone ? " (monotone)" : " (not monotone)") << '\n';
}

bool strictly_decreasing(const CsvTable& t, const std::string& col) {
  for (std::size_t r = 1; r < t.rows.size(); ++r)
    if (t.number(r, col) >= t.number(r - 1, col)) return false;
  return true;
}

}  // namespace

std::string render_report(const std::filesystem::path& manifest_path) {
  const RunManifest m = load_manifest(manifest_path);
  const std::filesystem::path dir = manifest_path.parent_path();

  std::ostringstream out;
  out << "experiment: " << m.kind << '\n';
  out << "config hash: " << m.config_hash << '\n';
  out << "created: " << m.created_utc << "  (wall " << short_float(m.total_wall_s) << " s)\n";

  auto table_for = [&dir](const std::string& name) { return read_csv(dir / name); };

  if (m.kind == "pressure") {
    const CsvTable t = table_for("pressure.csv");
    out << '\n' << render_table(t);
    fit_section(out, t, "side", "pressure_per_site", "pressure fit (a + b/L)");
  } else if (m.kind == "gibbs") {
    const CsvTable t = table_for("gibbs.csv");
    out << '\n' << render_table(t);
    fit_section(out, t, "side", "entropy_per_site", "entropy fit (a + b/L)");
  } else if (m.kind == "weakgibbs") {
    const CsvTable t = table_for("weakgibbs.csv");
    out << '\n' << render_table(t);
    const bool down = strictly_decreasing(t, "defect_per_site");
    out << "defect per site trend: " << (down ? "decreasing" : "not decreasing") << '\n';
    fit_section(out, t, "side", "defect_per_site", "defect fit (a + b/L)");
  } else if (m.kind == "equiv") {
    const CsvTable t = table_for("equiv.csv");
    const bool eq = t.rows.at(0).at(static_cast<std::size_t>(t.column("equivalent"))) == "true";
    out << "\nverdict: " << (eq ? "equivalent" : "inequivalent") << '\n';
    out << "max commutator defect: " << short_float(t.number(0, "max_defect")) << '\n';
    if (!eq)
      out << "witness: " << t.rows.at(0).at(static_cast<std::size_t>(t.column("witness")))
          << "  (defect " << short_float(t.number(0, "witness_defect")) << ")\n";
    const CsvTable d = table_for("equiv_density.csv");
    out << '\n' << render_table(d);
  } else if (m.kind == "quench" || m.kind == "fermion-quench") {
    const CsvTable t = table_for("quench.csv");
    out << '\n' << render_table(t);
    const double base = t.number(0, "e_psi");
    bool all_positive = t.rows.size() > 1;
    out << '\n';
    for (std::size_t r = 1; r < t.rows.size(); ++r) {
      const double delta = t.number(r, "e_psi") - base;
      all_positive = all_positive && delta > 0;
      out << "delta e_psi at T=" << short_float(t.number(r, "horizon")) << ": "
          << short_float(delta) << '\n';
    }
    out << "initial energy change: "
        << (all_positive ? "positive at every horizon" : "not uniformly positive") << '\n';
    if (m.kind == "fermion-quench") {
      const double n0 = t.number(0, "e_number");
      double spread = 0;
      for (std::size_t r = 1; r < t.rows.size(); ++r)
        spread = std::max(spread, std::abs(t.number(r, "e_number") - n0));
      out << "number density spread over horizons: " << short_float(spread) << '\n';
    }
    for (const auto& name : m.outputs)
      if (name == "quench_audit.csv") out << '\n' << render_table(table_for(name));
  } else if (m.kind == "bounds") {
    const CsvTable t = table_for("bounds.csv");
    out << '\n' << render_table(t);
    double worst = 0;
    bool first = true;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      const double m1 = t.number(r, "upper_margin");
      const double m2 = t.number(r, "lower_margin");
      const double lo = std::min(m1, m2);
      worst = first ? lo : std::min(worst, lo);
      first = false;
    }
    out << "smallest sandwich margin: " << short_float(worst)
        << (worst >= -1e-9 ? "  (within tolerance)" : "  (violated)") << '\n';
  }

  return out.str();
}

}  // namespace lattherm::lab
