#pragma once

#include <complex>
#include <span>
#include <vector>

#include "ancsim/geometry.hpp"
#include "ancsim/radiation.hpp"

namespace ancsim::acoustics {

struct OptimalControl {
    std::vector<std::complex<double>> strengths;  // q_S, one per secondary
    double condition_number = 0.0;                // of the secondary matrix
};

/// Least-squares minimizer of sum |P q_p + S q_S|^2 over the grid:
/// q_S = -(S^H S)^{-1} S^H P q_p. Throws IllPosedControlError when S is
/// rank deficient.
OptimalControl optimal_source_strengths(std::span<const std::complex<double>> primary,
                                        const ComplexMatrix& secondary,
                                        std::complex<double> q_p);

inline OptimalControl optimal_source_strengths(const TransferMatrices& tm,
                                               std::complex<double> q_p) {
    return optimal_source_strengths(tm.primary, tm.secondary, q_p);
}

/// Quadratic control cost J = sum_i |p_t(i)|^2 / (2 rho0 c0^2) with
/// p_t = P q_p + S q_S.
double control_cost(std::span<const std::complex<double>> primary,
                    const ComplexMatrix& secondary, std::complex<double> q_p,
                    std::span<const std::complex<double>> q_s, const Medium& medium);

/// NR = 10 log10( sum |p_without|^2 / sum |p_with|^2 ), in dB.
/// Returns +infinity when the controlled field is identically zero.
double noise_reduction_db(std::span<const std::complex<double>> p_without,
                          std::span<const std::complex<double>> p_with);

/// Boundary-control limit f_h = c0 / (2 l_s) for an opening of shorter
/// side l_s.
double max_controllable_frequency(double shorter_side_m, const Medium& medium);

} // namespace ancsim::acoustics
