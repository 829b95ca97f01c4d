// Process-level checks of the lattherm binary: schema rejection with exit 2,
// cap handling with exit 3, determinism of CSV output, and the shipped quench
// recipe against its golden table. argv[1] is the binary, argv[2] the recipes
// directory.

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lattherm/lab/csv.hpp"

namespace fs = std::filesystem;

namespace {

int failures = 0;
int checks = 0;

void check(bool ok, const std::string& what) {
  ++checks;
  if (!ok) {
    ++failures;
    std::cout << "[FAIL] " << what << '\n';
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run(const std::string& cli, const std::string& args, const fs::path& scratch) {
  const fs::path o = scratch / "stdout.txt";
  const fs::path e = scratch / "stderr.txt";
  const std::string cmd =
      "'" + cli + "' " + args + " >'" + o.string() + "' 2>'" + e.string() + "'";
  const int raw = std::system(cmd.c_str());
  Outcome r;
  if (raw != -1 && WIFEXITED(raw)) r.code = WEXITSTATUS(raw);
  r.out = slurp(o);
  r.err = slurp(e);
  return r;
}

fs::path write_config(const fs::path& scratch, const std::string& name,
                      const std::string& text) {
  const fs::path p = scratch / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: cli_harness <lattherm binary> <recipes dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path recipes = argv[2];
  const fs::path scratch = fs::temp_directory_path() / "lattherm_cli_harness";
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  // Twenty malformed configs; each must exit 2 with a line or field message.
  const std::vector<std::pair<std::string, std::string>> malformed = {
      {"truncated", "{"},
      {"trailing_comma", "{\"kind\": \"pressure\",}"},
      {"root_not_object", "[1, 2]"},
      {"missing_kind", "{}"},
      {"unknown_kind",
       R"({"kind": "frobnicate", "interaction": {"family": "heisenberg", "J": 1, "h": 0}})"},
      {"kind_not_string", R"({"kind": 3})"},
      {"missing_interaction", R"({"kind": "pressure", "sides": [2, 3]})"},
      {"unknown_top_key",
       R"({"kind": "pressure", "sides": [2], "interaction": {"family": "heisenberg", "J": 1, "h": 0}, "bogus": true})"},
      {"interaction_not_object", R"({"kind": "pressure", "sides": [2], "interaction": 5})"},
      {"interaction_empty", R"({"kind": "pressure", "sides": [2], "interaction": {}})"},
      {"unknown_family",
       R"({"kind": "pressure", "sides": [2], "interaction": {"family": "banana"}})"},
      {"family_missing_param",
       R"({"kind": "pressure", "sides": [2], "interaction": {"family": "ising_transverse", "J": 1}})"},
      {"param_not_number",
       R"({"kind": "pressure", "sides": [2], "interaction": {"family": "ising_transverse", "J": "one", "h": 1}})"},
      {"family_extra_key",
       R"({"kind": "pressure", "sides": [2], "interaction": {"family": "ising_transverse", "J": 1, "h": 1, "gamma": 0}})"},
      {"sides_empty",
       R"({"kind": "pressure", "sides": [], "interaction": {"family": "ising_transverse", "J": 1, "h": 1}})"},
      {"sides_descending",
       R"({"kind": "pressure", "sides": [4, 2], "interaction": {"family": "ising_transverse", "J": 1, "h": 1}})"},
      {"sides_nonpositive",
       R"({"kind": "pressure", "sides": [0, 2], "interaction": {"family": "ising_transverse", "J": 1, "h": 1}})"},
      {"ambient_not_larger",
       R"({"kind": "weakgibbs", "sides": [2, 3], "ambient_side": 3, "interaction": {"family": "ising_transverse", "J": 1, "h": 1}})"},
      {"quench_missing_horizons",
       R"({"kind": "quench", "interaction": {"family": "ising_transverse", "J": 1, "h": 0.5}, "initial": {"family": "ising_transverse", "J": 1, "h": 1}, "ambient_side": 8, "window_side": 3})"},
      {"quench_bad_horizon",
       R"({"kind": "quench", "interaction": {"family": "ising_transverse", "J": 1, "h": 0.5}, "initial": {"family": "ising_transverse", "J": 1, "h": 1}, "ambient_side": 8, "window_side": 3, "horizons": [0.0, 1.0]})"},
  };
  for (const auto& [name, text] : malformed) {
    const fs::path cfg = write_config(scratch, name + ".json", text);
    const Outcome r = run(cli, "run --config '" + cfg.string() + "' --out '" +
                                   (scratch / (name + "_out")).string() + "'",
                          scratch);
    check(r.code == 2, name + ": expected exit 2, got " + std::to_string(r.code));
    check(r.err.find("config") != std::string::npos &&
              (r.err.find("line") != std::string::npos ||
               r.err.find("field") != std::string::npos ||
               r.err.find("root") != std::string::npos),
          name + ": diagnostic should name a line or field, got: " + r.err);
  }

  // validate: accepts a good file and reports a key-order independent hash.
  const fs::path va = write_config(
      scratch, "va.json",
      R"({"kind": "gibbs", "sides": [2, 3], "interaction": {"family": "xy", "J": 1, "gamma": 0.4, "h": 0.2}})");
  const fs::path vb = write_config(
      scratch, "vb.json",
      R"({"interaction": {"h": 0.2, "gamma": 0.4, "J": 1, "family": "xy"}, "sides": [2, 3], "kind": "gibbs"})");
  const Outcome ra = run(cli, "validate --config '" + va.string() + "'", scratch);
  const Outcome rb = run(cli, "validate --config '" + vb.string() + "'", scratch);
  check(ra.code == 0 && rb.code == 0, "validate should accept both orderings");
  check(!ra.out.empty() && ra.out == rb.out,
        "hash must be stable under key reordering: " + ra.out + " vs " + rb.out);

  // Free spins: pressure per site is log 2 in every volume.
  const fs::path p0 = write_config(
      scratch, "p0.json",
      R"({"kind": "pressure", "sides": [2, 3, 4], "interaction": {"site_dim": 2, "dimension": 1, "terms": []}})");
  const fs::path p0_out = scratch / "p0_out";
  const Outcome rp = run(cli, "run --config '" + p0.string() + "' --out '" + p0_out.string() + "'",
                         scratch);
  check(rp.code == 0, "free-spin pressure run should succeed");
  {
    const lattherm::lab::CsvTable t = lattherm::lab::read_csv(p0_out / "pressure.csv");
    check(t.rows.size() == 3, "pressure.csv should have one row per side");
    for (std::size_t r = 0; r < t.rows.size(); ++r)
      check(std::abs(t.number(r, "pressure_per_site") - std::log(2.0)) < 1e-12,
            "pressure row " + std::to_string(r) + " should be log 2");
  }

  // Identity-shift pair: verdict equivalent, in the CSV and the report.
  const fs::path eq = write_config(
      scratch, "eq.json",
      R"({"kind": "equiv", "interaction": {"family": "ising_transverse", "J": 1, "h": 1},
          "other": {"family": "ising_transverse", "J": 1, "h": 1, "identity_shift": 0.7},
          "sides": [2, 3, 4]})");
  const fs::path eq_out = scratch / "eq_out";
  const Outcome re = run(cli, "run --config '" + eq.string() + "' --out '" + eq_out.string() + "'",
                         scratch);
  check(re.code == 0, "equiv run should succeed");
  {
    const lattherm::lab::CsvTable t = lattherm::lab::read_csv(eq_out / "equiv.csv");
    check(t.rows.size() == 1 && t.rows[0][0] == "true", "identity shift should be equivalent");
  }
  const Outcome rr =
      run(cli, "report '" + (eq_out / "manifest.json").string() + "'", scratch);
  check(rr.code == 0 && rr.out.find("verdict: equivalent") != std::string::npos,
        "report should carry the equivalence verdict");

  // Determinism: identical config, bit-identical CSV.
  const fs::path wg = write_config(
      scratch, "wg.json",
      R"({"kind": "weakgibbs", "interaction": {"family": "ising_transverse", "J": 0.08, "h": 0.4},
          "ambient_side": 7, "sides": [2, 3, 4]})");
  const Outcome r1 = run(
      cli, "run --config '" + wg.string() + "' --out '" + (scratch / "wg1").string() + "'",
      scratch);
  const Outcome r2 = run(
      cli, "run --config '" + wg.string() + "' --out '" + (scratch / "wg2").string() + "'",
      scratch);
  check(r1.code == 0 && r2.code == 0, "weakgibbs runs should succeed");
  check(slurp(scratch / "wg1" / "weakgibbs.csv") == slurp(scratch / "wg2" / "weakgibbs.csv") &&
            !slurp(scratch / "wg1" / "weakgibbs.csv").empty(),
        "reruns must produce byte-identical CSV");

  // Cap: the default rejects 2^13, and the message mentions the cap.
  const fs::path big = write_config(
      scratch, "big.json",
      R"({"kind": "pressure", "sides": [13], "interaction": {"family": "ising_transverse", "J": 1, "h": 1}})");
  const Outcome rc = run(cli, "run --config '" + big.string() + "' --out '" +
                                  (scratch / "big_out").string() + "'",
                         scratch);
  check(rc.code == 3, "over-cap run should exit 3, got " + std::to_string(rc.code));
  check(rc.err.find("cap") != std::string::npos, "cap message should mention the cap");

  // Report on a manifest that does not exist.
  const Outcome rm = run(cli, "report '" + (scratch / "nowhere" / "manifest.json").string() + "'",
                         scratch);
  check(rm.code == 2, "missing manifest should exit 2, got " + std::to_string(rm.code));

  // Bare invocation is a usage error.
  const Outcome ru = run(cli, "", scratch);
  check(ru.code == 2, "missing subcommand should exit 2, got " + std::to_string(ru.code));

  // The shipped quench recipe reproduces its golden table byte for byte.
  const fs::path recipe = recipes / "quench_acceptance.json";
  const fs::path golden = recipes / "quench_acceptance.golden.csv";
  check(fs::exists(recipe), "recipe file should be shipped");
  check(fs::exists(golden), "golden table should be shipped");
  if (fs::exists(recipe) && fs::exists(golden)) {
    const fs::path gout = scratch / "golden_out";
    const Outcome rg = run(
        cli, "run --config '" + recipe.string() + "' --out '" + gout.string() + "'", scratch);
    check(rg.code == 0, "recipe run should succeed");
    check(slurp(gout / "quench.csv") == slurp(golden),
          "recipe output must match the golden table byte for byte");
    const Outcome rq = run(cli, "report '" + (gout / "manifest.json").string() + "'", scratch);
    check(rq.code == 0 && rq.out.find("positive at every horizon") != std::string::npos,
          "quench report should state the increase verdict");
  }

  std::cout << (failures == 0 ? "[PASS] " : "[FAIL] ") << "cli harness: " << checks - failures
            << "/" << checks << " checks passed\n";
  return failures == 0 ? 0 : 1;
}
