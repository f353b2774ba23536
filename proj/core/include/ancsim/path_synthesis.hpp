#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "ancsim/geometry.hpp"

namespace ancsim::acoustics {

/// FIR model of the acoustic plant: one primary-path impulse response per
/// error microphone and one secondary-path response per (secondary, mic)
/// pair, all the same length and rate.
struct PathSet {
    int sample_rate = 0;
    std::size_t taps = 0;
    std::size_t n_secondaries = 0;
    std::size_t n_errors = 0;
    std::vector<std::vector<double>> primary;    // [m]
    std::vector<std::vector<double>> secondary;  // [k * n_errors + m]

    const std::vector<double>& secondary_ir(std::size_t k, std::size_t m) const {
        return secondary[k * n_errors + m];
    }
    std::vector<double>& secondary_ir(std::size_t k, std::size_t m) {
        return secondary[k * n_errors + m];
    }

    void validate() const;
};

/// Real FIR whose response approximates `response` (sampled on a uniform
/// grid from 0 to Nyquist inclusive) after a linear-phase delay of taps/2.
/// Conjugate-symmetric extension, inverse transform, causal shift,
/// Hann-windowed truncation.
std::vector<double> fir_from_frequency_response(
    std::span<const std::complex<double>> response, std::size_t taps, int sample_rate);

/// Free-field propagation path: windowed-sinc fractional delay of
/// distance/c0 seconds with amplitude gain / (4 pi distance).
std::vector<double> free_field_fir(double distance_m, double gain, std::size_t taps,
                                   int sample_rate, const Medium& medium);

/// Time-domain plant matching the analytic free-field exterior model:
/// primary = equivalent monopole at the opening centroid (baffle-doubled),
/// secondaries = baffle-doubled monopoles at their rim positions.
PathSet build_free_field_paths(const SourceLayout& layout, std::span<const Vec3> mics,
                               std::size_t taps, int sample_rate, const Medium& medium);

/// Same plant sampled in the frequency domain and synthesized with
/// fir_from_frequency_response. The primary path additionally carries the
/// cavity's duct-modal transfer from the interior source position to the
/// opening. Group delay of taps/2 on every path.
PathSet build_synthesized_paths(const SourceLayout& layout, std::span<const Vec3> mics,
                                std::size_t taps, int sample_rate, const Medium& medium,
                                const CavitySpec& cavity);

} // namespace ancsim::acoustics
