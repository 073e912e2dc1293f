#pragma once

#include <filesystem>
#include <string>

#include "bcreg/ensemble.hpp"

namespace bcreg {

inline constexpr int kArtifactSchemaVersion = 1;

struct Artifact {
  Ensemble ensemble;
  /// Configuration recorded at fit time (threads is not stored).
  EnsembleConfig config;
};

/// JSON text of a fitted ensemble: projection specs (matrices are redrawn
/// on load), posterior summaries, weights, window, standardization stats
/// and the fit configuration. Doubles are written in shortest round-trip
/// form, so loading reproduces every stored number bit for bit.
std::string ensemble_to_json(const Ensemble& ens, const EnsembleConfig& cfg = {});
/// Throws Error(FormatError) on schema problems.
Artifact ensemble_from_json(const std::string& text);

void save_ensemble(const Ensemble& ens, const EnsembleConfig& cfg, const std::filesystem::path& path);
Artifact load_ensemble(const std::filesystem::path& path);

}  // namespace bcreg
