#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ancsim/path_synthesis.hpp"
#include "ancsim/sample_buffer.hpp"

namespace ancsim::control {

/// Black-box plant for identification: drives secondary `k` with `u` and
/// returns the response at every error microphone (one channel per mic,
/// same length as u).
using PlantFn = std::function<std::vector<std::vector<double>>(
    std::size_t k, std::span<const double> u)>;

struct IdentificationResult {
    std::vector<std::vector<double>> s_hat;  // K*M FIRs, index k*M + m
    /// Final-pass residual error power over plant output power; small means
    /// the model explains the plant.
    double error_power_ratio = 0.0;
};

/// Offline LMS identification, one secondary driven at a time with the
/// given excitation (white noise recommended), `passes` sweeps over it.
IdentificationResult identify_secondary_paths(const PlantFn& plant,
                                              std::size_t n_secondaries,
                                              std::size_t n_errors,
                                              const SampleBuffer& excitation,
                                              std::size_t taps, double mu, int passes);

/// Convenience overload treating a PathSet's secondary responses as the
/// black box.
IdentificationResult identify_secondary_paths(const acoustics::PathSet& plant,
                                              const SampleBuffer& excitation,
                                              std::size_t taps, double mu, int passes);

} // namespace ancsim::control
