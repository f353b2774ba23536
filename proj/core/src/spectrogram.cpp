#include "ancsim/spectrogram.hpp"

#include <cmath>

#include "ancsim/dsp.hpp"

namespace ancsim::analysis {

Spectrogram make_spectrogram(const SampleBuffer& buffer, std::size_t window,
                             std::size_t hop) {
    buffer.validate();
    if (hop < 1 || window < hop)
        throw DomainError("make_spectrogram: need window >= hop >= 1");
    if (window > buffer.frames())
        throw DomainError("make_spectrogram: window longer than the buffer");

    const auto& x = buffer.channels[0];
    const auto w = dsp::hann_window(window);

    Spectrogram out;
    out.sample_rate = buffer.sample_rate;
    out.window = window;
    out.hop = hop;

    std::vector<double> frame(window);
    for (std::size_t start = 0; start + window <= x.size(); start += hop) {
        for (std::size_t i = 0; i < window; ++i)
            frame[i] = x[start + i] * w[i];
        const auto spectrum = dsp::fft_real(frame);
        std::vector<double> mag(spectrum.size());
        for (std::size_t j = 0; j < spectrum.size(); ++j)
            mag[j] = std::abs(spectrum[j]);
        out.magnitude.push_back(std::move(mag));
    }
    return out;
}

} // namespace ancsim::analysis
