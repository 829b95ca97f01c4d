#pragma once

#include <filesystem>

#include "lattherm/lab/config.hpp"
#include "lattherm/lab/manifest.hpp"

namespace lattherm::lab {

struct RunOutcome {
  std::filesystem::path manifest_path;
  RunManifest manifest;
};

// Executes the experiment, writes its CSV outputs plus manifest.json into
// out_dir (created if needed), and returns the manifest. All numerical output
// is deterministic for a given config and seed; only the timestamp and wall
// times vary between runs.
RunOutcome run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                          long cap = kDefaultDimCap);

}  // namespace lattherm::lab
