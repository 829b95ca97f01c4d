#pragma once

#include <filesystem>
#include <string>

namespace lattherm::lab {

// Renders the results referenced by a manifest as plain text: tables, trend
// fits, and verdict lines. Throws ManifestMissing when the manifest or any
// referenced CSV is absent.
std::string render_report(const std::filesystem::path& manifest_path);

}  // namespace lattherm::lab
