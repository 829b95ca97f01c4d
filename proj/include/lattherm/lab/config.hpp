#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lattherm/fermions.hpp"
#include "lattherm/interaction.hpp"

namespace lattherm::lab {

enum class ExperimentKind {
  kPressure,
  kGibbs,
  kWeakGibbs,
  kEquiv,
  kQuench,
  kFermionQuench,
  kBounds,
};

const char* kind_name(ExperimentKind kind);

// One experiment file, already validated. `hash` is the FNV-1a 64 digest of
// the canonical (key-sorted) serialization, so key order in the file does not
// matter.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kPressure;
  double beta = 1.0;
  std::uint64_t seed = 0;
  std::string out_dir;  // from the file; the CLI flag overrides

  Interaction interaction{SiteSpace(2), 1};       // phi / driving
  std::optional<Interaction> initial;             // psi for quench kinds
  std::optional<Interaction> other;               // second interaction for equiv
  std::optional<FermionInteraction> fermion_phi;  // raw blocks for fermion-quench
  std::optional<FermionInteraction> fermion_psi;

  std::vector<long> sides;      // cube sides for per-volume kinds
  long ambient_side = 0;        // weakgibbs / quench kinds
  long window_side = 0;         // quench kinds
  long side = 0;                // bounds kind
  std::vector<double> times;
  std::vector<double> horizons;
  long count = 10;              // bounds: number of random perturbations
  double amplitude = 0.5;       // bounds: perturbation scale

  std::string hash;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Throws ConfigInvalid with a line diagnostic for malformed JSON and a field
// diagnostic for schema violations.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace lattherm::lab
