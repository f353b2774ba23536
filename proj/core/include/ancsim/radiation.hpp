#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ancsim/geometry.hpp"

namespace ancsim::acoustics {

/// Dense row-major complex matrix, just enough structure to carry transfer
/// matrices between modules.
struct ComplexMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<std::complex<double>> data;

    ComplexMatrix() = default;
    ComplexMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    std::complex<double>& operator()(std::size_t i, std::size_t j) {
        return data[i * cols + j];
    }
    const std::complex<double>& operator()(std::size_t i, std::size_t j) const {
        return data[i * cols + j];
    }
};

/// Free-field monopole: pressure per unit volume velocity,
/// j rho0 omega e^{-jkr} / (4 pi r).
std::complex<double> monopole_transfer(const Vec3& source, const Vec3& receiver,
                                       double freq, const Medium& medium);

/// Monopole in front of a rigid baffle at y = baffle_y: direct wave plus
/// the mirror image across the plane. A source on the plane doubles.
std::complex<double> baffled_transfer(const Vec3& source, const Vec3& receiver,
                                      double freq, const Medium& medium,
                                      double baffle_y);

/// Exterior pressure at each grid point: equivalent primary monopole at the
/// opening centroid plus the boundary secondaries, all baffled. The
/// scattering correction is taken as zero.
std::vector<std::complex<double>> exterior_pressure(const SourceLayout& layout,
                                                    const EvalGrid& grid, double freq,
                                                    const Medium& medium);

/// Unit-strength transfer vectors/matrix: primary[i] is the grid response
/// per unit primary strength, secondary(i, k) per unit strength of
/// secondary k.
struct TransferMatrices {
    std::vector<std::complex<double>> primary;  // N_V
    ComplexMatrix secondary;                    // N_V x K
};

TransferMatrices transfer_matrices(const SourceLayout& layout, const EvalGrid& grid,
                                   double freq, const Medium& medium);

} // namespace ancsim::acoustics
