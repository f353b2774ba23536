#pragma once

#include <cstddef>
#include <vector>

#include "ancsim/errors.hpp"

namespace ancsim {

/// Uniformly sampled multichannel time signal. Sample values are sound
/// pressure in pascals; every channel has the same length.
struct SampleBuffer {
    int sample_rate = 0;
    std::vector<std::vector<double>> channels;

    SampleBuffer() = default;

    SampleBuffer(int rate, std::size_t n_channels, std::size_t n_frames)
        : sample_rate(rate),
          channels(n_channels, std::vector<double>(n_frames, 0.0)) {}

    std::size_t channel_count() const { return channels.size(); }

    std::size_t frames() const { return channels.empty() ? 0 : channels.front().size(); }

    double duration_s() const {
        return sample_rate > 0 ? static_cast<double>(frames()) / sample_rate : 0.0;
    }

    void validate() const {
        if (sample_rate <= 0)
            throw DomainError("SampleBuffer: sample_rate must be a positive integer");
        if (channels.empty())
            throw DomainError("SampleBuffer: at least one channel required");
        for (const auto& ch : channels)
            if (ch.size() != channels.front().size())
                throw DomainError("SampleBuffer: channels must have equal length");
    }

    /// Copy of frames [begin, end) across all channels.
    SampleBuffer slice(std::size_t begin, std::size_t end) const {
        if (begin > end || end > frames())
            throw DomainError("SampleBuffer::slice: range out of bounds");
        SampleBuffer out(sample_rate, channel_count(), end - begin);
        for (std::size_t c = 0; c < channel_count(); ++c)
            for (std::size_t i = begin; i < end; ++i)
                out.channels[c][i - begin] = channels[c][i];
        return out;
    }
};

} // namespace ancsim
