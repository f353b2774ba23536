#pragma once

#include <cstddef>
#include <vector>

#include "ancsim/sample_buffer.hpp"

namespace ancsim::analysis {

/// Hann-windowed short-time transform magnitudes of channel 0.
/// Frame i covers samples [i*hop, i*hop + window); bin j maps to
/// j * sample_rate / window Hz.
struct Spectrogram {
    int sample_rate = 0;
    std::size_t window = 0;
    std::size_t hop = 0;
    std::vector<std::vector<double>> magnitude;  // frames x (window/2 + 1)

    std::size_t frame_count() const { return magnitude.size(); }
    std::size_t bin_count() const {
        return magnitude.empty() ? 0 : magnitude.front().size();
    }
    double bin_hz(std::size_t j) const {
        return static_cast<double>(j) * sample_rate / static_cast<double>(window);
    }
    double frame_time_s(std::size_t i) const {
        return static_cast<double>(i * hop) / sample_rate;
    }
};

Spectrogram make_spectrogram(const SampleBuffer& buffer, std::size_t window,
                             std::size_t hop);

} // namespace ancsim::analysis
