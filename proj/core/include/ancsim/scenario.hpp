#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ancsim/fxlms.hpp"
#include "ancsim/geometry.hpp"
#include "ancsim/levels.hpp"
#include "ancsim/signal_gen.hpp"

namespace ancsim::scenario {

enum class PlantMode { AnalyticFreeField, ModalSynthesized };

struct IdentificationSpec {
    bool exact = true;     // copy the true paths instead of identifying
    double mu = 0.002;
    int passes = 1;
    double seconds = 10.0;
    double excitation_rms_pa = 1.0;
};

struct EvalGridSpec {
    bool hemisphere = true;
    double radius = 2.0;
    int count = 64;
    std::vector<Vec3> points;  // used when hemisphere == false
};

struct AnalysisSpec {
    analysis::Weighting weighting = analysis::Weighting::Flat;
    double settle_s = 1.0;
    double convergence_window_s = 0.5;
    bool band_spectra = true;
    std::optional<std::pair<std::size_t, std::size_t>> spectrogram;  // window, hop
};

struct Scenario {
    int version = 1;
    std::string label;
    std::uint64_t seed = 1;
    Medium medium;
    CavitySpec cavity;
    SourceLayout layout;
    std::vector<Vec3> error_mics;
    EvalGridSpec eval_grid;
    PlantMode plant_mode = PlantMode::AnalyticFreeField;
    std::size_t plant_taps = 128;
    IdentificationSpec identification;
    control::FxlmsConfig controller;
    signals::SignalSpec stimulus;
    bool stimulus_seed_explicit = false;
    double background_spl_db = 40.0;
    AnalysisSpec analysis;
    std::vector<double> optimal_freqs_hz;

    /// FNV-1a of the canonical JSON form; embedded in every report.
    std::string hash;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::filesystem::path& path);

EvalGrid build_eval_grid(const Scenario& s);

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity;
    std::string field;
    std::string message;
};

/// Geometric sanity plus a controller stability estimate for the configured
/// step size. Schema problems surface as Error diagnostics when validating
/// a file; a loaded Scenario has already passed the schema.
std::vector<Diagnostic> validate_scenario(const Scenario& s);
std::vector<Diagnostic> validate_file(const std::filesystem::path& path);

std::uint64_t fnv1a64(const std::string& bytes);

} // namespace ancsim::scenario
