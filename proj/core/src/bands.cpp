#include "ancsim/bands.hpp"

#include <cmath>
#include <limits>

#include "ancsim/dsp.hpp"

namespace ancsim::analysis {

std::vector<double> third_octave_centers(int sample_rate, double min_center_hz) {
    const double nyquist = sample_rate / 2.0;
    const double edge = std::pow(10.0, 1.0 / 20.0);  // half-band factor
    std::vector<double> centers;
    // Base-10 series f_c = 1000 * 10^(i/10).
    for (int i = -20; i <= 20; ++i) {
        const double fc = 1000.0 * std::pow(10.0, i / 10.0);
        if (fc < min_center_hz)
            continue;
        if (fc * edge > nyquist)
            break;
        centers.push_back(fc);
    }
    return centers;
}

BandSpectrum third_octave_spectrum(const SampleBuffer& buffer, Weighting weighting) {
    buffer.validate();
    const std::size_t n = buffer.frames();
    if (n < static_cast<std::size_t>(buffer.sample_rate))
        throw DomainError("third_octave_spectrum: need at least 1 s of signal");

    const double edge = std::pow(10.0, 1.0 / 20.0);
    const auto centers = third_octave_centers(buffer.sample_rate);
    std::vector<double> power(centers.size(), 0.0);

    const double bin_hz = static_cast<double>(buffer.sample_rate) / static_cast<double>(n);
    for (const auto& ch : buffer.channels) {
        const auto spectrum = dsp::fft_real(ch);
        for (std::size_t i = 1; i < spectrum.size(); ++i) {
            const double f = static_cast<double>(i) * bin_hz;
            const bool interior = !(n % 2 == 0 && i == spectrum.size() - 1);
            double p = (interior ? 2.0 : 1.0) * std::norm(spectrum[i]) /
                       (static_cast<double>(n) * static_cast<double>(n));
            if (weighting == Weighting::A)
                p *= std::pow(10.0, a_weight_db(f) / 10.0);
            // locate the band containing f: edges c/edge .. c*edge
            for (std::size_t b = 0; b < centers.size(); ++b) {
                if (f >= centers[b] / edge && f < centers[b] * edge) {
                    power[b] += p;
                    break;
                }
            }
        }
    }

    BandSpectrum out;
    out.weighting = weighting;
    out.bands.reserve(centers.size());
    const double ref2 = kPressureRef * kPressureRef;
    const double channels = static_cast<double>(buffer.channel_count());
    for (std::size_t b = 0; b < centers.size(); ++b) {
        const double mean_power = power[b] / channels;
        const double level = mean_power > 0.0
                                 ? 10.0 * std::log10(mean_power / ref2)
                                 : -std::numeric_limits<double>::infinity();
        out.bands.push_back({centers[b], level});
    }
    return out;
}

} // namespace ancsim::analysis
