#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "lattherm/equivalence.hpp"
#include "lattherm/lab/config.hpp"
#include "lattherm/lab/csv.hpp"
#include "lattherm/lab/manifest.hpp"
#include "lattherm/lab/report.hpp"
#include "lattherm/lab/runner.hpp"

using namespace lattherm;
using namespace lattherm::lab;

namespace {

std::filesystem::path fresh_dir(const std::string& leaf) {
  const auto dir = std::filesystem::temp_directory_path() / leaf;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// The thrown message must carry the offending field or line.
void expect_invalid(const std::string& text, const std::string& needle) {
  try {
    parse_config_text(text);
    FAIL("accepted: ", text);
  } catch (const ConfigInvalid& e) {
    const std::string msg = e.what();
    if (msg.find(needle) == std::string::npos)
      FAIL("diagnostic '", msg, "' does not mention '", needle, "'");
  }
}

}  // namespace

TEST_SUITE_BEGIN("lab");

TEST_CASE("config parsing and canonical hashing") {
  const std::string a = R"({
    "kind": "pressure",
    "interaction": {"family": "ising_transverse", "J": 0.3, "h": 1.2},
    "sides": [2, 3, 4],
    "beta": 2.0,
    "seed": 7
  })";
  const std::string b = R"({
    "seed": 7,
    "beta": 2.0,
    "sides": [2, 3, 4],
    "interaction": {"h": 1.2, "J": 0.3, "family": "ising_transverse"},
    "kind": "pressure"
  })";
  const ExperimentConfig ca = parse_config_text(a);
  const ExperimentConfig cb = parse_config_text(b);

  CHECK(ca.kind == ExperimentKind::kPressure);
  CHECK(ca.beta == 2.0);
  CHECK(ca.seed == 7);
  CHECK(ca.sides == std::vector<long>{2, 3, 4});
  CHECK(ca.interaction.range() == 1);
  CHECK(ca.hash.size() == 16);
  CHECK(ca.hash == cb.hash);

  const ExperimentConfig cc = parse_config_text(
      R"({"kind": "pressure", "interaction": {"family": "ising_transverse", "J": 0.3, "h": 1.21},
          "sides": [2, 3, 4], "beta": 2.0, "seed": 7})");
  CHECK(cc.hash != ca.hash);
}

TEST_CASE("config defaults and optional blocks") {
  const ExperimentConfig c = parse_config_text(
      R"({"kind": "equiv",
          "interaction": {"family": "heisenberg", "J": 1.0, "h": 0.0},
          "other": {"family": "heisenberg", "J": 1.0, "h": 0.0, "identity_shift": 0.4}})");
  CHECK(c.beta == 1.0);
  CHECK(c.seed == 0);
  CHECK(c.sides == std::vector<long>{2, 4, 6, 8});
  REQUIRE(c.other.has_value());
  CHECK(physically_equivalent(c.interaction, *c.other).equivalent);

  const ExperimentConfig f = parse_config_text(
      R"({"kind": "fermion-quench",
          "interaction": {"type": "fermion", "t": [1.0], "mu": 0.2, "V": [0.5]},
          "initial": {"family": "fermion_hopping", "t": [1.0], "mu": 0.8},
          "ambient_side": 6, "window_side": 3, "horizons": [1.0]})");
  REQUIRE(f.fermion_phi.has_value());
  REQUIRE(f.fermion_psi.has_value());
  CHECK(f.fermion_phi->density == std::vector<double>{0.5});
  CHECK(f.fermion_psi->gauge_invariant());

  const ExperimentConfig t = parse_config_text(
      R"({"kind": "gibbs", "sides": [2],
          "interaction": {"site_dim": 2, "dimension": 1,
                          "terms": [{"shape": [[0]],
                                     "matrix": [[1,0],[0,0],[0,0],[0,0]]}]}})");
  CHECK(t.interaction.range() == 0);
  CHECK(t.interaction.site().dim == 2);
}

TEST_CASE("config rejection carries the offending line or field") {
  expect_invalid("{\n \"kind\": \"pressure\",\n \"interaction\": {,}\n}", "line 3");
  expect_invalid("[1, 2]", "root");
  expect_invalid(R"({"interaction": {"family": "heisenberg", "J": 1, "h": 0}})", "kind");
  expect_invalid(R"({"kind": "frobnicate", "interaction": {}})", "frobnicate");
  expect_invalid(
      R"({"kind": "pressure", "sides": [2],
          "interaction": {"family": "ising_transverse", "J": 1, "h": 1}, "bogus": 1})",
      "bogus");
  expect_invalid(
      R"({"kind": "pressure", "sides": [2], "interaction": {"family": "ising_transverse", "J": 1}})",
      "interaction.h");
  expect_invalid(
      R"({"kind": "pressure", "sides": [2], "interaction": {"family": "ising_transverse",
          "J": 1, "h": 1, "gamma": 0}})",
      "interaction.gamma");
  expect_invalid(
      R"({"kind": "equiv", "interaction": {"family": "xy", "J": 1, "gamma": 0, "h": 1},
          "other": {"family": "unknowable"}})",
      "other.family");
  expect_invalid(
      R"({"kind": "pressure", "sides": [2, 2],
          "interaction": {"family": "ising_transverse", "J": 1, "h": 1}})",
      "sides[1]");
  expect_invalid(
      R"({"kind": "quench", "interaction": {"family": "ising_transverse", "J": 1, "h": 0.5},
          "initial": {"family": "ising_transverse", "J": 1, "h": 1},
          "ambient_side": 6, "window_side": 6, "horizons": [1.0]})",
      "window_side");
  expect_invalid(
      R"({"kind": "quench", "interaction": {"family": "ising_transverse", "J": 1, "h": 0.5},
          "initial": {"family": "ising_transverse", "J": 1, "h": 1},
          "ambient_side": 8, "window_side": 3, "horizons": [2.0, 1.0]})",
      "horizons[1]");
  expect_invalid(
      R"({"kind": "fermion-quench", "interaction": {"family": "ising_transverse", "J": 1, "h": 1},
          "initial": {"type": "fermion", "t": [1.0]},
          "ambient_side": 8, "window_side": 3, "horizons": [1.0]})",
      "interaction");
  expect_invalid(
      R"({"kind": "bounds", "interaction": {"family": "ising_transverse", "J": 1, "h": 1},
          "side": 4, "count": 0})",
      "count");
  expect_invalid(
      R"({"kind": "weakgibbs", "interaction": {"family": "ising_transverse", "J": 1, "h": 1},
          "sides": [2, 3], "ambient_side": 3})",
      "ambient_side");
}

TEST_CASE("csv formatting and round trip") {
  CHECK(csv_float(0.1) == "0.10000000000000001");
  CHECK(csv_float(2.0) == "2");
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("A,B") == "\"A,B\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");

  CsvWriter w({"name", "value"});
  w.add_row({"unit(0,0)@0", csv_float(0.5)});
  w.add_row({"plain", "1"});
  CHECK_THROWS_AS(w.add_row({"too", "many", "fields"}), const Error&);
  CHECK(w.str() == "name,value\n\"unit(0,0)@0\",0.5\nplain,1\n");

  const auto dir = fresh_dir("lattherm_lab_csv");
  w.write(dir / "t.csv");
  const CsvTable t = read_csv(dir / "t.csv");
  REQUIRE(t.header == std::vector<std::string>{"name", "value"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][0] == "unit(0,0)@0");
  CHECK(t.number(0, "value") == 0.5);
  CHECK_THROWS_AS(t.column("missing"), const Error&);
}

TEST_CASE("manifest round trip and missing outputs") {
  const auto dir = fresh_dir("lattherm_lab_manifest");
  RunManifest m;
  m.kind = "pressure";
  m.config_hash = "0123456789abcdef";
  m.created_utc = utc_timestamp_now();
  m.total_wall_s = 0.25;
  m.op_wall_s = {{"pressure L=2", 0.1}, {"pressure L=3", 0.15}};
  m.outputs = {"pressure.csv"};

  std::ofstream(dir / "pressure.csv") << "side\n2\n";
  write_manifest(m, dir / "manifest.json");
  const RunManifest back = load_manifest(dir / "manifest.json");
  CHECK(back.artifact_version == kArtifactVersion);
  CHECK(back.kind == m.kind);
  CHECK(back.config_hash == m.config_hash);
  CHECK(back.op_wall_s == m.op_wall_s);
  CHECK(back.outputs == m.outputs);

  std::filesystem::remove(dir / "pressure.csv");
  CHECK_THROWS_AS(load_manifest(dir / "manifest.json"), const ManifestMissing&);
  CHECK_THROWS_AS(load_manifest(dir / "absent.json"), const ManifestMissing&);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK_THROWS_AS(load_manifest(dir / "broken.json"), const ManifestMissing&);
}

TEST_CASE("runner writes the free-spin pressure table") {
  const ExperimentConfig cfg = parse_config_text(
      R"({"kind": "pressure",
          "interaction": {"site_dim": 2, "dimension": 1, "terms": []},
          "sides": [2, 3, 4]})");
  const auto dir = fresh_dir("lattherm_lab_run");
  const RunOutcome outcome = run_experiment(cfg, dir);

  CHECK(outcome.manifest.kind == "pressure");
  CHECK(outcome.manifest.config_hash == cfg.hash);
  REQUIRE(outcome.manifest.outputs == std::vector<std::string>{"pressure.csv"});

  const CsvTable t = read_csv(dir / "pressure.csv");
  REQUIRE(t.rows.size() == 3);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    CHECK(t.number(r, "pressure_per_site") == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(t.number(r, "energy_per_site") == doctest::Approx(0.0).epsilon(1e-14));
  }

  const std::string report = render_report(outcome.manifest_path);
  CHECK(report.find("experiment: pressure") != std::string::npos);
  CHECK(report.find("pressure fit") != std::string::npos);
  CHECK(report.find(cfg.hash) != std::string::npos);
}

TEST_SUITE_END();
