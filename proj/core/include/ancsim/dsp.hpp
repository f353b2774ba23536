#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ancsim::dsp {

inline constexpr double kPi = 3.14159265358979323846;

/// Forward real FFT; returns n/2 + 1 bins (unnormalized, e^{-j...} kernel).
std::vector<std::complex<double>> fft_real(std::span<const double> x);

/// Inverse of fft_real for a conjugate-symmetric half spectrum of n/2 + 1
/// bins; returns n real samples, normalized by 1/n.
std::vector<double> ifft_real(std::span<const std::complex<double>> half_spectrum, std::size_t n);

/// Full linear convolution, length a + b - 1. Switches to FFT overlap when
/// the direct product count gets large; both paths give the same result to
/// rounding.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

/// Causal FIR filtering: y[i] = sum_k h[k] x[i-k], output length == input.
std::vector<double> fir_filter(std::span<const double> x, std::span<const double> h);

/// Forward-backward FIR pass (zero phase, squared magnitude response).
std::vector<double> filtfilt(std::span<const double> x, std::span<const double> h);

std::vector<double> hann_window(std::size_t n);          // symmetric
std::vector<double> hann_window_periodic(std::size_t n); // w[n/2] == 1 exactly
std::vector<double> kaiser_window(std::size_t n, double beta);

double sinc(double x); // sin(pi x)/(pi x)

/// Linear-phase windowed-sinc bandpass (Kaiser), odd length.
std::vector<double> design_bandpass_fir(double low_hz, double high_hz, int sample_rate,
                                        std::size_t taps, double beta);

/// Amplitude and phase of the component of x at freq_hz, by correlation
/// against quadrature references over whole samples.
struct ToneEstimate {
    double amplitude;
    double phase;
};
ToneEstimate measure_tone(std::span<const double> x, double freq_hz, int sample_rate);

double mean_square(std::span<const double> x);
double rms(std::span<const double> x);

/// Neumaier compensated sum; reduction order is fixed (sequential) so the
/// result does not depend on chunking.
double stable_sum(std::span<const double> x);

/// Deterministic PRNG: mt19937_64 stream plus an explicit Box-Muller
/// gaussian, so sequences do not depend on the standard library's
/// distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform();                        // [0, 1)
    double uniform(double lo, double hi);
    double gaussian();                       // standard normal

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace ancsim::dsp
