#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "lattherm/errors.hpp"

namespace lattherm::lab {

inline constexpr const char* kArtifactVersion = "0.1.0";

// Sidecar written next to the CSV outputs of a run. Everything except the
// timestamp and the wall times is deterministic for a given config.
struct RunManifest {
  std::string artifact_version = kArtifactVersion;
  std::string kind;
  std::string config_hash;
  std::string created_utc;
  double total_wall_s = 0.0;
  std::vector<std::pair<std::string, double>> op_wall_s;
  std::vector<std::string> outputs;  // file names relative to the manifest
};

std::string utc_timestamp_now();

void write_manifest(const RunManifest& m, const std::filesystem::path& file);

// Throws ManifestMissing when the file is absent, unparseable, or lists an
// output that does not exist next to it.
RunManifest load_manifest(const std::filesystem::path& file);

}  // namespace lattherm::lab
