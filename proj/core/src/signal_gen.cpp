#include "ancsim/signal_gen.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "ancsim/dsp.hpp"
#include "ancsim/wav_io.hpp"

namespace ancsim::signals {

using dsp::kPi;

namespace {

std::size_t frame_count(double duration_s, int sample_rate) {
    if (duration_s <= 0.0)
        throw DomainError("signal duration must be positive");
    if (sample_rate <= 0)
        throw DomainError("sample_rate must be a positive integer");
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate));
}

void check_below_nyquist(double freq_hz, int sample_rate) {
    if (freq_hz <= 0.0 || freq_hz >= sample_rate / 2.0)
        throw DomainError("tone frequency " + std::to_string(freq_hz) +
                          " Hz is outside (0, Nyquist) for sample rate " +
                          std::to_string(sample_rate));
}

} // namespace

SampleBuffer make_tone(double freq_hz, double amplitude_pa, double phase_rad,
                       double duration_s, int sample_rate) {
    check_below_nyquist(freq_hz, sample_rate);
    const std::size_t n = frame_count(duration_s, sample_rate);
    SampleBuffer out(sample_rate, 1, n);
    const double w = 2.0 * kPi * freq_hz / sample_rate;
    auto& ch = out.channels[0];
    for (std::size_t i = 0; i < n; ++i)
        ch[i] = amplitude_pa * std::sin(w * static_cast<double>(i) + phase_rad);
    return out;
}

SampleBuffer make_multitone(const std::vector<ToneComponent>& tones,
                            double duration_s, int sample_rate) {
    if (tones.empty())
        throw DomainError("multitone needs at least one component");
    for (const auto& t : tones)
        check_below_nyquist(t.freq_hz, sample_rate);
    const std::size_t n = frame_count(duration_s, sample_rate);
    SampleBuffer out(sample_rate, 1, n);
    auto& ch = out.channels[0];
    for (const auto& t : tones) {
        const double w = 2.0 * kPi * t.freq_hz / sample_rate;
        for (std::size_t i = 0; i < n; ++i)
            ch[i] += t.amplitude_pa * std::sin(w * static_cast<double>(i) + t.phase_rad);
    }
    return out;
}

SampleBuffer make_white_noise(double rms_pa, double duration_s, int sample_rate,
                              std::uint64_t seed) {
    const std::size_t n = frame_count(duration_s, sample_rate);
    SampleBuffer out(sample_rate, 1, n);
    dsp::Rng rng(seed);
    auto& ch = out.channels[0];
    for (double& v : ch)
        v = rng.gaussian();
    const double measured = dsp::rms(ch);
    if (measured > 0.0) {
        const double scale = rms_pa / measured;
        for (double& v : ch)
            v *= scale;
    }
    return out;
}

SampleBuffer make_bandlimited_noise(double low_hz, double high_hz, double rms_pa,
                                    double duration_s, int sample_rate,
                                    std::uint64_t seed) {
    if (!(0.0 < low_hz && low_hz < high_hz && high_hz < sample_rate / 2.0))
        throw DomainError("band edges must satisfy 0 < low < high < Nyquist");

    // Transition has to fit inside the 10% guard bands on both edges.
    const double transition_hz = 0.5 * std::min(0.1 * low_hz, 0.1 * high_hz);
    // Kaiser sizing for ~90 dB total rejection; the forward-backward pass
    // doubles the per-pass attenuation, so design each pass for 45 dB.
    const double atten_db = 45.0;
    const double delta_w = 2.0 * kPi * transition_hz / sample_rate;
    std::size_t taps = static_cast<std::size_t>(
        std::ceil((atten_db - 7.95) / (2.285 * delta_w)));
    taps = std::max<std::size_t>(taps, 513);
    if (taps % 2 == 0)
        ++taps;
    const double beta = 0.1102 * (atten_db - 8.7);
    const auto h = dsp::design_bandpass_fir(low_hz - transition_hz, high_hz + transition_hz,
                                            sample_rate, taps, beta);

    const std::size_t n = frame_count(duration_s, sample_rate);
    // Generate extra and trim so the filter edge transients don't land in
    // the output.
    const std::size_t pad = taps;
    dsp::Rng rng(seed);
    std::vector<double> raw(n + 2 * pad);
    for (double& v : raw)
        v = rng.gaussian();

    auto filtered = dsp::filtfilt(raw, h);
    SampleBuffer out(sample_rate, 1, n);
    std::copy(filtered.begin() + static_cast<std::ptrdiff_t>(pad),
              filtered.begin() + static_cast<std::ptrdiff_t>(pad + n),
              out.channels[0].begin());

    const double measured = dsp::rms(out.channels[0]);
    if (measured > 0.0) {
        const double scale = rms_pa / measured;
        for (double& v : out.channels[0])
            v *= scale;
    }
    return out;
}

SampleBuffer render(const SignalSpec& spec) {
    switch (spec.kind) {
    case SignalKind::Tone:
        return make_tone(spec.freq_hz, spec.amplitude_pa, spec.phase_rad,
                         spec.duration_s, spec.sample_rate);
    case SignalKind::Multitone:
        return make_multitone(spec.tones, spec.duration_s, spec.sample_rate);
    case SignalKind::BandlimitedWgn:
        return make_bandlimited_noise(spec.low_hz, spec.high_hz, spec.rms_pa,
                                      spec.duration_s, spec.sample_rate, spec.seed);
    case SignalKind::WavFile: {
        SampleBuffer buf = read_wav(spec.path);
        if (spec.duration_s > 0.0) {
            const std::size_t want =
                static_cast<std::size_t>(std::llround(spec.duration_s * buf.sample_rate));
            if (want < buf.frames())
                buf = buf.slice(0, want);
        }
        return buf;
    }
    }
    throw DomainError("unknown signal kind");
}

} // namespace ancsim::signals
