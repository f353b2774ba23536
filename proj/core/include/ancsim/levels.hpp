#pragma once

#include "ancsim/sample_buffer.hpp"

namespace ancsim::analysis {

inline constexpr double kPressureRef = 20e-6;  // pascals, 0 dB SPL

enum class Weighting { Flat, A };

/// Standard analytic A-weighting magnitude in dB, normalized to 0 at 1 kHz.
double a_weight_db(double freq_hz);

/// Sound pressure level over the whole buffer: 20 log10(rms / 20 uPa).
/// Multichannel buffers pool mean-square power across channels. A-weighting
/// is applied per frequency bin before the power sum. All-zero input gives
/// -infinity.
double spl_db(const SampleBuffer& buffer, Weighting weighting = Weighting::Flat);

} // namespace ancsim::analysis
