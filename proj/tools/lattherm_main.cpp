#include <CLI11.hpp>

#include <Eigen/Core>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "lattherm/lab/config.hpp"
#include "lattherm/lab/report.hpp"
#include "lattherm/lab/runner.hpp"

namespace {

// Flag wins over LATTICETHERM_THREADS; a malformed env value falls back to
// the Eigen default with a warning.
int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("LATTICETHERM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    std::cerr << "warning: ignoring invalid LATTICETHERM_THREADS='" << env << "'\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-volume laboratory for translation-invariant lattice models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string manifest_path;
  int threads = 0;
  long cap_override = 0;

  CLI::App* run = app.add_subcommand("run", "execute an experiment file");
  run->add_option("--config", config_path, "experiment file (JSON)")->required();
  run->add_option("--out", out_dir, "output directory (overrides the file's 'out')");
  run->add_option("--threads", threads, "Eigen thread count");
  run->add_option("--cap-override", cap_override,
                  "acknowledge the cost and raise the Hilbert-space dimension cap");

  CLI::App* validate = app.add_subcommand("validate", "check an experiment file and exit");
  validate->add_option("--config", config_path, "experiment file (JSON)")->required();

  CLI::App* report = app.add_subcommand("report", "render the results behind a manifest");
  report->add_option("manifest", manifest_path, "manifest.json written by run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const long cap = cap_override > 0 ? cap_override : lattherm::kDefaultDimCap;
    if (const int t = resolve_threads(threads)) Eigen::setNbThreads(t);

    if (run->parsed()) {
      const lattherm::lab::ExperimentConfig cfg = lattherm::lab::load_config(config_path);
      std::filesystem::path out;
      if (!out_dir.empty())
        out = out_dir;
      else if (!cfg.out_dir.empty())
        out = cfg.out_dir;
      else
        out = std::filesystem::path("results") /
              (std::string(lattherm::lab::kind_name(cfg.kind)) + "-" + cfg.hash);
      const lattherm::lab::RunOutcome outcome = lattherm::lab::run_experiment(cfg, out, cap);
      std::cout << outcome.manifest_path.string() << '\n';
    } else if (validate->parsed()) {
      const lattherm::lab::ExperimentConfig cfg = lattherm::lab::load_config(config_path);
      std::cout << "ok: kind=" << lattherm::lab::kind_name(cfg.kind) << " hash=" << cfg.hash
                << '\n';
    } else if (report->parsed()) {
      std::cout << lattherm::lab::render_report(manifest_path);
    }
    return 0;
  } catch (const lattherm::ConfigInvalid& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const lattherm::ManifestMissing& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const lattherm::MarginTooSmall& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const lattherm::VolumeTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "hint: pass --cap-override to acknowledge the cost of a larger volume\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
}
