#include "ancsim/levels.hpp"

#include <cmath>
#include <limits>

#include "ancsim/dsp.hpp"

namespace ancsim::analysis {

namespace {

// IEC 61672 pole frequencies.
double a_weight_linear(double f) {
    const double f2 = f * f;
    const double c1 = 20.598997 * 20.598997;
    const double c2 = 107.65265 * 107.65265;
    const double c3 = 737.86223 * 737.86223;
    const double c4 = 12194.217 * 12194.217;
    return (c4 * f2 * f2) /
           ((f2 + c1) * std::sqrt((f2 + c2) * (f2 + c3)) * (f2 + c4));
}

double a_weight_offset_db() {
    static const double offset = -20.0 * std::log10(a_weight_linear(1000.0));
    return offset;
}

} // namespace

double a_weight_db(double freq_hz) {
    if (freq_hz <= 0.0)
        throw DomainError("a_weight_db: frequency must be positive");
    return 20.0 * std::log10(a_weight_linear(freq_hz)) + a_weight_offset_db();
}

double spl_db(const SampleBuffer& buffer, Weighting weighting) {
    buffer.validate();
    if (buffer.frames() == 0)
        throw DomainError("spl_db: empty buffer");

    double mean_square = 0.0;
    if (weighting == Weighting::Flat) {
        for (const auto& ch : buffer.channels)
            mean_square += dsp::mean_square(ch);
        mean_square /= static_cast<double>(buffer.channel_count());
    } else {
        // Weight the periodogram bins, then integrate back to a power.
        const std::size_t n = buffer.frames();
        for (const auto& ch : buffer.channels) {
            const auto spectrum = dsp::fft_real(ch);
            double acc = 0.0;
            for (std::size_t i = 0; i < spectrum.size(); ++i) {
                const double f = static_cast<double>(i) * buffer.sample_rate /
                                 static_cast<double>(n);
                if (f <= 0.0)
                    continue;  // A-weighting suppresses DC entirely
                const double g = std::pow(10.0, a_weight_db(f) / 10.0);
                // one-sided power accounting: interior bins count twice
                const bool interior = i != 0 && !(n % 2 == 0 && i == spectrum.size() - 1);
                const double w = interior ? 2.0 : 1.0;
                acc += g * w * std::norm(spectrum[i]);
            }
            mean_square += acc / (static_cast<double>(n) * static_cast<double>(n));
        }
        mean_square /= static_cast<double>(buffer.channel_count());
    }

    if (mean_square <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(mean_square / (kPressureRef * kPressureRef));
}

} // namespace ancsim::analysis
