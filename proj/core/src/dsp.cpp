#include "ancsim/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <new>
#include <stdexcept>

#include <fftw3.h>

namespace ancsim::dsp {

namespace {

// FFTW plan creation is not thread safe; execution of distinct plans is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

} // namespace

namespace {

// fftw_malloc keeps buffer alignment identical from run to run, so plan
// kernel selection (and therefore rounding) is reproducible.
struct FftwBuffer {
    void* p;
    explicit FftwBuffer(std::size_t bytes) : p(fftw_malloc(bytes)) {
        if (!p)
            throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(p); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
};

} // namespace

std::vector<std::complex<double>> fft_real(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0)
        throw std::invalid_argument("fft_real: empty input");
    FftwBuffer inb(n * sizeof(double));
    FftwBuffer outb((n / 2 + 1) * sizeof(fftw_complex));
    auto* in = static_cast<double*>(inb.p);
    auto* out = static_cast<fftw_complex*>(outb.p);
    std::copy(x.begin(), x.end(), in);
    fftw_plan plan;
    {
        std::lock_guard lock(plan_mutex());
        plan = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
    std::vector<std::complex<double>> result(n / 2 + 1);
    for (std::size_t i = 0; i < result.size(); ++i)
        result[i] = {out[i][0], out[i][1]};
    return result;
}

std::vector<double> ifft_real(std::span<const std::complex<double>> half_spectrum,
                              std::size_t n) {
    if (half_spectrum.size() != n / 2 + 1)
        throw std::invalid_argument("ifft_real: spectrum size must be n/2 + 1");
    FftwBuffer inb((n / 2 + 1) * sizeof(fftw_complex));
    FftwBuffer outb(n * sizeof(double));
    auto* in = static_cast<fftw_complex*>(inb.p);
    auto* out = static_cast<double*>(outb.p);
    for (std::size_t i = 0; i < half_spectrum.size(); ++i) {
        in[i][0] = half_spectrum[i].real();
        in[i][1] = half_spectrum[i].imag();
    }
    fftw_plan plan;
    {
        std::lock_guard lock(plan_mutex());
        plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), in, out, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard lock(plan_mutex());
        fftw_destroy_plan(plan);
    }
    std::vector<double> result(out, out + n);
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : result)
        v *= scale;
    return result;
}

namespace {

std::vector<double> convolve_direct(std::span<const double> a, std::span<const double> b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a[i];
        if (ai == 0.0)
            continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            out[i + j] += ai * b[j];
    }
    return out;
}

std::vector<double> convolve_fft(std::span<const double> a, std::span<const double> b) {
    const std::size_t m = a.size() + b.size() - 1;
    std::size_t n = 1;
    while (n < m)
        n <<= 1;
    std::vector<double> pa(n, 0.0), pb(n, 0.0);
    std::copy(a.begin(), a.end(), pa.begin());
    std::copy(b.begin(), b.end(), pb.begin());
    auto fa = fft_real(pa);
    auto fb = fft_real(pb);
    for (std::size_t i = 0; i < fa.size(); ++i)
        fa[i] *= fb[i];
    auto full = ifft_real(fa, n);
    full.resize(m);
    return full;
}

} // namespace

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("convolve: empty operand");
    if (a.size() * b.size() <= 1u << 22)
        return convolve_direct(a, b);
    return convolve_fft(a, b);
}

std::vector<double> fir_filter(std::span<const double> x, std::span<const double> h) {
    if (h.empty())
        throw std::invalid_argument("fir_filter: empty filter");
    if (x.size() * h.size() > 1u << 22) {
        auto full = convolve_fft(x, h);
        full.resize(x.size());
        return full;
    }
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const std::size_t kmax = std::min(h.size() - 1, i);
        double acc = 0.0;
        for (std::size_t k = 0; k <= kmax; ++k)
            acc += h[k] * x[i - k];
        y[i] = acc;
    }
    return y;
}

std::vector<double> filtfilt(std::span<const double> x, std::span<const double> h) {
    auto fwd = fir_filter(x, h);
    std::reverse(fwd.begin(), fwd.end());
    auto bwd = fir_filter(fwd, h);
    std::reverse(bwd.begin(), bwd.end());
    return bwd;
}

std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n < 2)
        return w;
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) /
                                     static_cast<double>(n - 1)));
    return w;
}

std::vector<double> hann_window_periodic(std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n < 2)
        return w;
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) /
                                     static_cast<double>(n)));
    return w;
}

namespace {

// Zeroth-order modified Bessel function, series expansion.
double bessel_i0(double x) {
    double sum = 1.0, term = 1.0;
    const double half_x = x / 2.0;
    for (int k = 1; k < 64; ++k) {
        term *= (half_x / k) * (half_x / k);
        sum += term;
        if (term < 1e-18 * sum)
            break;
    }
    return sum;
}

} // namespace

std::vector<double> kaiser_window(std::size_t n, double beta) {
    std::vector<double> w(n, 1.0);
    if (n < 2)
        return w;
    const double denom = bessel_i0(beta);
    const double half = static_cast<double>(n - 1) / 2.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (static_cast<double>(i) - half) / half;
        w[i] = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / denom;
    }
    return w;
}

double sinc(double x) {
    if (x == 0.0)
        return 1.0;
    const double px = kPi * x;
    return std::sin(px) / px;
}

std::vector<double> design_bandpass_fir(double low_hz, double high_hz, int sample_rate,
                                        std::size_t taps, double beta) {
    if (taps % 2 == 0)
        throw std::invalid_argument("design_bandpass_fir: taps must be odd");
    if (!(0.0 < low_hz && low_hz < high_hz && high_hz < sample_rate / 2.0))
        throw std::invalid_argument("design_bandpass_fir: invalid band edges");
    const double f1 = low_hz / sample_rate;
    const double f2 = high_hz / sample_rate;
    const auto w = kaiser_window(taps, beta);
    std::vector<double> h(taps);
    const double center = static_cast<double>(taps - 1) / 2.0;
    for (std::size_t i = 0; i < taps; ++i) {
        const double t = static_cast<double>(i) - center;
        // difference of two lowpass kernels
        h[i] = (2.0 * f2 * sinc(2.0 * f2 * t) - 2.0 * f1 * sinc(2.0 * f1 * t)) * w[i];
    }
    return h;
}

ToneEstimate measure_tone(std::span<const double> x, double freq_hz, int sample_rate) {
    if (x.empty())
        throw std::invalid_argument("measure_tone: empty input");
    double sc = 0.0, ss = 0.0;
    const double w = 2.0 * kPi * freq_hz / sample_rate;
    for (std::size_t n = 0; n < x.size(); ++n) {
        sc += x[n] * std::cos(w * static_cast<double>(n));
        ss += x[n] * std::sin(w * static_cast<double>(n));
    }
    const double scale = 2.0 / static_cast<double>(x.size());
    const double re = sc * scale;  // against cos
    const double im = ss * scale;  // against sin
    // x[n] ~ A sin(w n + phi) = A sin(phi) cos(w n) + A cos(phi) sin(w n)
    return ToneEstimate{std::hypot(re, im), std::atan2(re, im)};
}

double mean_square(std::span<const double> x) {
    if (x.empty())
        return 0.0;
    double acc = 0.0, comp = 0.0;
    for (double v : x) {
        const double sq = v * v;
        const double t = acc + sq;
        if (std::abs(acc) >= std::abs(sq))
            comp += (acc - t) + sq;
        else
            comp += (sq - t) + acc;
        acc = t;
    }
    return (acc + comp) / static_cast<double>(x.size());
}

double rms(std::span<const double> x) { return std::sqrt(mean_square(x)); }

double stable_sum(std::span<const double> x) {
    double acc = 0.0, comp = 0.0;
    for (double v : x) {
        const double t = acc + v;
        if (std::abs(acc) >= std::abs(v))
            comp += (acc - t) + v;
        else
            comp += (v - t) + acc;
        acc = t;
    }
    return acc + comp;
}

double Rng::uniform() {
    // 53-bit mantissa in [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0)
        u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * kPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

} // namespace ancsim::dsp
