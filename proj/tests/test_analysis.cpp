#include <doctest.h>

#include <cmath>

#include "ancsim/bands.hpp"
#include "ancsim/dsp.hpp"
#include "ancsim/errors.hpp"
#include "ancsim/levels.hpp"
#include "ancsim/nr_report.hpp"
#include "ancsim/signal_gen.hpp"
#include "ancsim/spectrogram.hpp"

using namespace ancsim;
using namespace ancsim::analysis;

TEST_CASE("spl of a 1 kHz tone at 1 Pa") {
    const auto tone = signals::make_tone(1000.0, 1.0, 0.0, 1.0, 16000);
    const double expected = 20.0 * std::log10((1.0 / std::sqrt(2.0)) / 20e-6);
    CHECK(spl_db(tone) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(spl_db(tone) == doctest::Approx(90.97).epsilon(1e-3));
    // A-weighting is 0 dB at 1 kHz
    CHECK(spl_db(tone, Weighting::A) == doctest::Approx(spl_db(tone)).epsilon(1e-3));
}

TEST_CASE("doubling the amplitude adds 6.02 dB") {
    const auto a = signals::make_tone(320.0, 0.7, 0.0, 1.0, 16000);
    const auto b = signals::make_tone(320.0, 1.4, 0.0, 1.0, 16000);
    CHECK(spl_db(b) - spl_db(a) == doctest::Approx(6.0206).epsilon(1e-6));
}

TEST_CASE("silence reports negative infinity, not a crash") {
    SampleBuffer zero(16000, 1, 1600);
    CHECK(std::isinf(spl_db(zero)));
    CHECK(spl_db(zero) < 0.0);
}

TEST_CASE("a-weighting matches the standard anchors") {
    CHECK(std::abs(a_weight_db(1000.0)) <= 0.01);
    CHECK(a_weight_db(50.0) == doctest::Approx(-30.2).epsilon(0.5 / 30.2));
    CHECK(a_weight_db(100.0) == doctest::Approx(-19.1).epsilon(0.5 / 19.1));
    CHECK(a_weight_db(500.0) == doctest::Approx(-3.2).epsilon(0.5 / 3.2));
    CHECK(std::abs(a_weight_db(2000.0) - 1.2) <= 0.5);

    // monotonically increasing below 1 kHz
    double prev = a_weight_db(20.0);
    for (double f = 25.0; f <= 1000.0; f *= 1.12) {
        const double g = a_weight_db(f);
        CHECK(g > prev);
        prev = g;
    }
}

TEST_CASE("a-weighted 100 Hz tone sits ~19.1 dB below flat") {
    const auto tone = signals::make_tone(100.0, 1.0, 0.0, 2.0, 16000);
    const double drop = spl_db(tone) - spl_db(tone, Weighting::A);
    CHECK(drop == doctest::Approx(19.1).epsilon(0.02));
}

TEST_CASE("a pure tone lands in its third-octave band") {
    const auto tone = signals::make_tone(250.0, 1.0, 0.0, 2.0, 16000);
    const auto spectrum = third_octave_spectrum(tone);

    double total = 0.0, in_band = 0.0;
    for (const auto& b : spectrum.bands) {
        if (std::isinf(b.spl_db))
            continue;
        const double p = std::pow(10.0, b.spl_db / 10.0);
        total += p;
        if (std::abs(b.center_hz - 251.19) < 1.0)  // 10^(2.4) band
            in_band += p;
    }
    CHECK(in_band / total >= 0.99);
}

TEST_CASE("third-octave power partition matches the time-domain power") {
    const auto noise = signals::make_bandlimited_noise(50.0, 600.0, 1.0, 4.0, 16000, 5);
    const auto spectrum = third_octave_spectrum(noise);

    double band_sum = 0.0;
    for (const auto& b : spectrum.bands)
        if (!std::isinf(b.spl_db))
            band_sum += std::pow(10.0, b.spl_db / 10.0) * 20e-6 * 20e-6;
    const double direct = dsp::mean_square(noise.channels[0]);
    CHECK(band_sum == doctest::Approx(direct).epsilon(0.02));
}

TEST_CASE("white noise climbs about 1 dB per third-octave band") {
    const auto noise = signals::make_white_noise(1.0, 16.0, 16000, 6);
    const auto spectrum = third_octave_spectrum(noise);

    // average increment over the flat mid region
    std::vector<double> levels;
    for (const auto& b : spectrum.bands)
        if (b.center_hz >= 100.0 && b.center_hz <= 2000.0)
            levels.push_back(b.spl_db);
    REQUIRE(levels.size() >= 10);
    double mean_step = 0.0;
    for (std::size_t i = 1; i < levels.size(); ++i)
        mean_step += levels[i] - levels[i - 1];
    mean_step /= static_cast<double>(levels.size() - 1);
    CHECK(mean_step == doctest::Approx(10.0 * std::log10(std::pow(2.0, 1.0 / 3.0)))
                           .epsilon(0.15));
}

TEST_CASE("short buffers are rejected for band analysis") {
    const auto tone = signals::make_tone(250.0, 1.0, 0.0, 0.5, 16000);
    CHECK_THROWS_AS(third_octave_spectrum(tone), DomainError);
}

TEST_CASE("spectrogram of a stationary tone peaks at a constant bin") {
    const auto tone = signals::make_tone(200.0, 1.0, 0.0, 2.0, 16000);
    const auto gram = make_spectrogram(tone, 1024, 512);
    REQUIRE(gram.frame_count() > 10);

    const std::size_t expected_bin =
        static_cast<std::size_t>(std::lround(200.0 * 1024.0 / 16000.0));
    for (std::size_t i = 0; i < gram.frame_count(); ++i) {
        std::size_t peak = 0;
        for (std::size_t j = 1; j < gram.bin_count(); ++j)
            if (gram.magnitude[i][j] > gram.magnitude[i][peak])
                peak = j;
        CHECK(peak == expected_bin);
    }
}

TEST_CASE("spectrogram energy accounting stays within 2%") {
    const auto tone = signals::make_tone(440.0, 1.0, 0.0, 4.0, 16000);
    const std::size_t window = 512, hop = 256;
    const auto gram = make_spectrogram(tone, window, hop);

    // Parseval per frame, then Hann-squared overlap factor 3/8 * (window/hop)
    double stft_energy = 0.0;
    for (std::size_t i = 0; i < gram.frame_count(); ++i) {
        double frame = 0.0;
        for (std::size_t j = 0; j < gram.bin_count(); ++j) {
            const bool interior = j != 0 && j != gram.bin_count() - 1;
            frame += (interior ? 2.0 : 1.0) * gram.magnitude[i][j] *
                     gram.magnitude[i][j];
        }
        stft_energy += frame / static_cast<double>(window);
    }

    double signal_energy = 0.0;
    for (double v : tone.channels[0])
        signal_energy += v * v;

    const double overlap_factor = (3.0 / 8.0) * static_cast<double>(window) /
                                  static_cast<double>(hop);
    CHECK(stft_energy == doctest::Approx(signal_energy * overlap_factor).epsilon(0.02));
}

TEST_CASE("spectrogram tracks a linear chirp upward") {
    const int rate = 16000;
    const double f0 = 100.0, f1 = 400.0, dur = 4.0;
    SampleBuffer chirp(rate, 1, static_cast<std::size_t>(dur * rate));
    for (std::size_t n = 0; n < chirp.frames(); ++n) {
        const double t = static_cast<double>(n) / rate;
        const double phase =
            2.0 * dsp::kPi * (f0 * t + 0.5 * (f1 - f0) / dur * t * t);
        chirp.channels[0][n] = std::sin(phase);
    }
    const auto gram = make_spectrogram(chirp, 2048, 1024);

    std::size_t prev_peak = 0;
    for (std::size_t i = 0; i < gram.frame_count(); ++i) {
        std::size_t peak = 0;
        for (std::size_t j = 1; j < gram.bin_count(); ++j)
            if (gram.magnitude[i][j] > gram.magnitude[i][peak])
                peak = j;
        CHECK(peak >= prev_peak);
        prev_peak = peak;
    }
    CHECK(prev_peak > 0);
}

TEST_CASE("spectrogram rejects a window longer than the signal") {
    const auto tone = signals::make_tone(200.0, 1.0, 0.0, 0.01, 16000);
    CHECK_THROWS_AS(make_spectrogram(tone, 1024, 512), DomainError);
}

TEST_CASE("broadband NR rows") {
    const auto sig = signals::make_bandlimited_noise(150.0, 600.0, 0.5, 2.0, 16000, 12);
    auto half = sig;
    for (double& v : half.channels[0])
        v *= 0.5;

    const auto same = broadband_nr(sig, sig, Weighting::Flat, "same");
    CHECK(same.nr_db == 0.0);
    CHECK_FALSE(same.provisional);

    const auto six = broadband_nr(sig, half, Weighting::Flat, "half");
    CHECK(six.nr_db == doctest::Approx(6.0206).epsilon(1e-6));

    const auto flagged = broadband_nr(sig, half, Weighting::Flat, "early", false);
    CHECK(flagged.provisional);
}
