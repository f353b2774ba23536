#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ancsim/nr_report.hpp"
#include "ancsim/scenario.hpp"

namespace ancsim::scenario {

struct RunOptions {
    std::filesystem::path output_dir;  // empty: "out/<label>"
    std::optional<std::uint64_t> seed_override;
    bool write_wavs = true;
};

struct RunResult {
    analysis::NrRow nr_converged;   // over the post-convergence window
    analysis::NrRow nr_whole;       // over everything after the settle period
    bool converged = false;
    double converged_at_s = 0.0;
    std::string summary_json;       // exact bytes written to summary.json
    std::filesystem::path output_dir;
};

/// Full pipeline: build the plant, obtain secondary-path estimates, run the
/// closed loop, analyze, and write the report bundle (summary JSON, NR CSV,
/// band CSVs, error WAVs, residual-power CSV).
RunResult run_scenario(const Scenario& s, const RunOptions& options = {});

struct OptimalRow {
    double freq_hz = 0.0;
    double nr_db = 0.0;
    double condition = 0.0;
    bool ill_posed = false;  // row retained with nr_db meaningless
};

struct OptimalSweep {
    std::vector<OptimalRow> rows;
};

/// Frequency-domain optimal control over the scenario's evaluation grid:
/// least-squares source strengths and the resulting NR per frequency.
OptimalSweep run_optimal_analysis(const Scenario& s,
                                  std::span<const double> freqs_hz = {});

void write_optimal_csv(const OptimalSweep& sweep, const std::string& scenario_hash,
                       const std::filesystem::path& path);

struct SweepRow {
    double freq_hz = 0.0;
    analysis::NrRow nr;
    bool converged = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::filesystem::path output_dir;
};

/// Tonal sweep: reruns the scenario with the stimulus replaced by each tone,
/// one worker per tone up to `jobs`, each writing into its own subdirectory.
SweepResult run_tonal_sweep(const Scenario& base, std::span<const double> tones_hz,
                            int jobs, const RunOptions& options = {});

} // namespace ancsim::scenario
