#pragma once

#include <cstddef>
#include <vector>

#include "ancsim/sample_buffer.hpp"

namespace ancsim::control {

struct WienerSolution {
    std::vector<std::vector<double>> weights;  // K x L
    double residual_power = 0.0;               // mean square over (n, m)
    bool regularized = false;                  // ridge applied to a singular solve
};

/// Batch least squares for the control filters: minimizes
///   sum_n sum_m ( d_m(n) - sum_k (s_{k,m} * (w_k * x))(n) )^2
/// by direct normal equations over the filtered-reference regressors.
/// Near-singular systems get a ridge of 1e-10 * trace and set the
/// `regularized` flag.
WienerSolution wiener_solution(const SampleBuffer& x, const SampleBuffer& d,
                               const std::vector<std::vector<double>>& s,
                               std::size_t n_secondaries, std::size_t taps);

} // namespace ancsim::control
