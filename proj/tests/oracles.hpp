#pragma once

// Test-side oracles, independent of the library's solve paths.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ancsim/radiation.hpp"

namespace ancsim::oracles {

/// Total squared pressure sum_i |P_i q_p + sum_k S_ik q_k|^2.
inline double squared_residual(std::span<const std::complex<double>> primary,
                               const acoustics::ComplexMatrix& secondary,
                               std::complex<double> q_p,
                               std::span<const std::complex<double>> q_s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < primary.size(); ++i) {
        std::complex<double> pt = primary[i] * q_p;
        for (std::size_t k = 0; k < q_s.size(); ++k)
            pt += secondary(i, k) * q_s[k];
        acc += std::norm(pt);
    }
    return acc;
}

/// Brute-force minimizer of the squared residual by per-coordinate dense
/// complex grid search (400 x 400 per coordinate) centered on `start`,
/// cycled until no coordinate moves. For one secondary this is a plain
/// 400 x 400 search around the starting point.
inline std::vector<std::complex<double>> grid_search_strengths(
    std::span<const std::complex<double>> primary,
    const acoustics::ComplexMatrix& secondary, std::complex<double> q_p,
    std::span<const std::complex<double>> start, double half_width_rel = 0.25,
    int grid_points = 400, int cycles = 4) {
    std::vector<std::complex<double>> q(start.begin(), start.end());
    for (int cycle = 0; cycle < cycles; ++cycle) {
        const double shrink = std::pow(0.25, cycle);
        for (std::size_t k = 0; k < q.size(); ++k) {
            const double scale = std::max(std::abs(q[k]), 1e-6);
            const double hw = half_width_rel * scale * shrink;
            const std::complex<double> center = q[k];
            double best = -1.0;
            std::complex<double> best_q = center;
            for (int a = 0; a < grid_points; ++a) {
                const double re =
                    center.real() - hw + 2.0 * hw * a / (grid_points - 1);
                for (int b = 0; b < grid_points; ++b) {
                    const double im =
                        center.imag() - hw + 2.0 * hw * b / (grid_points - 1);
                    q[k] = {re, im};
                    const double j = squared_residual(primary, secondary, q_p, q);
                    if (best < 0.0 || j < best) {
                        best = j;
                        best_q = q[k];
                    }
                }
            }
            q[k] = best_q;
        }
    }
    return q;
}

} // namespace ancsim::oracles
