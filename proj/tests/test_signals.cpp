#include <doctest.h>

#include <cmath>

#include "ancsim/dsp.hpp"
#include "ancsim/errors.hpp"
#include "ancsim/signal_gen.hpp"

using namespace ancsim;

TEST_CASE("tone samples match the closed form") {
    const auto buf = signals::make_tone(100.0, 1.0, 0.0, 1.0, 16000);
    REQUIRE(buf.channel_count() == 1);
    REQUIRE(buf.frames() == 16000);
    CHECK(buf.channels[0][0] == doctest::Approx(0.0).epsilon(1e-12));
    // quarter period of 100 Hz at 16 kHz
    CHECK(buf.channels[0][40] == doctest::Approx(1.0).epsilon(1e-12));

    const auto half = signals::make_tone(50.0, 1.0, 0.0, 1.0, 16000);
    CHECK(std::abs(half.channels[0][160]) < 1e-12);  // half-period zero crossing

    const auto cosine = signals::make_tone(440.0, 0.5, dsp::kPi / 2.0, 1.0, 16000);
    CHECK(cosine.channels[0][0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("tone frequency must stay below Nyquist") {
    CHECK_THROWS_AS(signals::make_tone(8000.0, 1.0, 0.0, 1.0, 16000), DomainError);
    CHECK_THROWS_AS(signals::make_tone(9000.0, 1.0, 0.0, 1.0, 16000), DomainError);
    CHECK_NOTHROW(signals::make_tone(7999.0, 1.0, 0.0, 1.0, 16000));
}

TEST_CASE("tone power over whole periods is A^2/2") {
    // 100 Hz at 16 kHz over 1 s: exactly 100 periods.
    const auto buf = signals::make_tone(100.0, 2.0, 0.3, 1.0, 16000);
    const double p = dsp::mean_square(buf.channels[0]);
    CHECK(p == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("multitone sums its components") {
    const std::vector<signals::ToneComponent> tones = {{100.0, 1.0, 0.0},
                                                       {250.0, 0.5, 0.1}};
    const auto buf = signals::make_multitone(tones, 0.5, 16000);
    const auto a = signals::make_tone(100.0, 1.0, 0.0, 0.5, 16000);
    const auto b = signals::make_tone(250.0, 0.5, 0.1, 0.5, 16000);
    for (std::size_t i = 0; i < buf.frames(); i += 37)
        CHECK(buf.channels[0][i] ==
              doctest::Approx(a.channels[0][i] + b.channels[0][i]).epsilon(1e-12));
}

namespace {

double band_power_fraction(const SampleBuffer& buf, double lo, double hi) {
    const auto spec = dsp::fft_real(buf.channels[0]);
    const double bin_hz =
        static_cast<double>(buf.sample_rate) / static_cast<double>(buf.frames());
    double total = 0.0, in_band = 0.0;
    for (std::size_t i = 1; i < spec.size(); ++i) {
        const double p = std::norm(spec[i]);
        total += p;
        const double f = i * bin_hz;
        if (f >= lo && f <= hi)
            in_band += p;
    }
    return in_band / total;
}

} // namespace

TEST_CASE("bandlimited noise keeps its power inside the band") {
    const auto buf = signals::make_bandlimited_noise(200.0, 300.0, 1.0, 10.0, 16000, 7);
    CHECK(band_power_fraction(buf, 180.0, 320.0) >= 0.95);
    // rejection is actually much sharper than the contract
    CHECK(band_power_fraction(buf, 180.0, 320.0) >= 0.999);
    CHECK(dsp::rms(buf.channels[0]) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("bandlimited noise is reproducible and scales exactly") {
    const auto a = signals::make_bandlimited_noise(150.0, 600.0, 1.0, 10.0, 16000, 7);
    const auto b = signals::make_bandlimited_noise(150.0, 600.0, 1.0, 10.0, 16000, 7);
    REQUIRE(a.frames() == b.frames());
    for (std::size_t i = 0; i < a.frames(); ++i)
        REQUIRE(a.channels[0][i] == b.channels[0][i]);  // bit identical

    const auto c = signals::make_bandlimited_noise(150.0, 600.0, 2.0, 10.0, 16000, 7);
    const double pa = dsp::mean_square(a.channels[0]);
    const double pc = dsp::mean_square(c.channels[0]);
    CHECK(pc == doctest::Approx(4.0 * pa).epsilon(1e-12));
}

TEST_CASE("bandlimited noise rejects invalid edges") {
    CHECK_THROWS_AS(signals::make_bandlimited_noise(300.0, 200.0, 1.0, 1.0, 16000, 1),
                    DomainError);
    CHECK_THROWS_AS(signals::make_bandlimited_noise(0.0, 200.0, 1.0, 1.0, 16000, 1),
                    DomainError);
    CHECK_THROWS_AS(signals::make_bandlimited_noise(200.0, 9000.0, 1.0, 1.0, 16000, 1),
                    DomainError);
}

TEST_CASE("white noise hits the requested rms") {
    const auto buf = signals::make_white_noise(0.5, 2.0, 16000, 3);
    CHECK(dsp::rms(buf.channels[0]) == doctest::Approx(0.5).epsilon(1e-12));
}
