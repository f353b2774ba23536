#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ancsim/fxlms.hpp"
#include "ancsim/path_synthesis.hpp"
#include "ancsim/sample_buffer.hpp"

namespace ancsim::control {

/// Optional coherence degradation of the reference pickup: a propagation
/// FIR plus additive sensor noise.
struct ReferenceModel {
    std::vector<double> fir;   // empty = identity
    double noise_rms = 0.0;    // pascals
    std::uint64_t noise_seed = 0;
};

struct SimulationParams {
    double settle_s = 1.0;                 // excluded from converged metrics
    double background_spl_db = 40.0;       // white noise on each mic
    std::uint64_t noise_seed = 1;
    double convergence_window_s = 0.5;
    double convergence_delta_db = 0.1;
    std::optional<ReferenceModel> reference;
    std::size_t w_snapshot_interval = 0;   // samples; 0 disables snapshots
};

struct SimulationLog {
    int sample_rate = 0;
    std::size_t settle_samples = 0;
    std::vector<std::vector<double>> desired;  // d_m: error signal with ANC off
    std::vector<std::vector<double>> error;    // e_m: residual with ANC on
    std::vector<std::vector<double>> output;   // y_k: control signals
    std::vector<std::pair<std::size_t, std::vector<std::vector<double>>>> w_snapshots;
    bool converged = false;
    std::size_t converged_at = 0;  // sample index where the rule fired

    std::size_t frames() const { return desired.empty() ? 0 : desired.front().size(); }
    SampleBuffer desired_buffer() const;
    SampleBuffer error_buffer() const;
    /// Frame index from which "converged" metrics should be taken.
    std::size_t analysis_start() const;
};

/// Sample-synchronous closed loop around the FxLMS controller:
///   d_m(n) = (P_m * x)(n) + background noise
///   e_m(n) = d_m(n) - sum_k (S_{k,m} * y_k)(n)
/// with the primary signal itself as the coherent reference (optionally
/// degraded via params.reference).
SimulationLog run_simulation(const acoustics::PathSet& paths, const FxlmsConfig& config,
                             const std::vector<std::vector<double>>& s_hat,
                             const SampleBuffer& primary,
                             const SimulationParams& params = {});

} // namespace ancsim::control
