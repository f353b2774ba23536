#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ancsim/sample_buffer.hpp"

namespace ancsim::signals {

struct ToneComponent {
    double freq_hz;
    double amplitude_pa;
    double phase_rad = 0.0;
};

/// Single sinusoid: sample n = amplitude * sin(2 pi f n / rate + phase).
SampleBuffer make_tone(double freq_hz, double amplitude_pa, double phase_rad,
                       double duration_s, int sample_rate);

SampleBuffer make_multitone(const std::vector<ToneComponent>& tones,
                            double duration_s, int sample_rate);

/// White gaussian noise, flat spectrum, exact RMS.
SampleBuffer make_white_noise(double rms_pa, double duration_s, int sample_rate,
                              std::uint64_t seed);

/// Gaussian noise band-limited to [low_hz, high_hz] by a forward-backward
/// windowed-sinc FIR (zero phase), then scaled to the requested RMS.
/// Identical seed and parameters give bit-identical output.
SampleBuffer make_bandlimited_noise(double low_hz, double high_hz, double rms_pa,
                                    double duration_s, int sample_rate,
                                    std::uint64_t seed);

enum class SignalKind { Tone, Multitone, BandlimitedWgn, WavFile };

/// Declarative stimulus description; `render` produces the signal.
struct SignalSpec {
    SignalKind kind = SignalKind::Tone;
    double duration_s = 1.0;
    int sample_rate = 16000;

    // tone
    double freq_hz = 0.0;
    double amplitude_pa = 1.0;
    double phase_rad = 0.0;

    // multitone
    std::vector<ToneComponent> tones;

    // bandlimited_wgn
    double low_hz = 0.0;
    double high_hz = 0.0;
    double rms_pa = 1.0;
    std::uint64_t seed = 0;

    // wav_file
    std::string path;
};

SampleBuffer render(const SignalSpec& spec);

} // namespace ancsim::signals
