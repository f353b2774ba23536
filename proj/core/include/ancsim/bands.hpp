#pragma once

#include <vector>

#include "ancsim/levels.hpp"
#include "ancsim/sample_buffer.hpp"

namespace ancsim::analysis {

struct BandLevel {
    double center_hz;
    double spl_db;
};

struct BandSpectrum {
    Weighting weighting = Weighting::Flat;
    std::vector<BandLevel> bands;  // centers strictly increasing
};

/// Base-10 one-third-octave center frequencies (..., 50, 63, 80, 100, ...)
/// covering bands whose edges fit inside (0, Nyquist).
std::vector<double> third_octave_centers(int sample_rate, double min_center_hz = 20.0);

/// Band powers integrated from the rectangular-window periodogram; needs at
/// least one second of signal for resolution.
BandSpectrum third_octave_spectrum(const SampleBuffer& buffer,
                                   Weighting weighting = Weighting::Flat);

} // namespace ancsim::analysis
