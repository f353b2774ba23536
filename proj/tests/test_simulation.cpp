#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "ancsim/dsp.hpp"
#include "ancsim/nr_report.hpp"
#include "ancsim/optimal.hpp"
#include "ancsim/radiation.hpp"
#include "ancsim/signal_gen.hpp"
#include "ancsim/simulate.hpp"
#include "ancsim/wiener.hpp"
#include "fixtures.hpp"

using namespace ancsim;
using namespace ancsim::control;
using cdouble = std::complex<double>;

namespace {

const Medium kAir{};
constexpr int kRate = 16000;

acoustics::PathSet reference_plant() {
    return acoustics::build_free_field_paths(fixtures::reference_layout(),
                                             fixtures::reference_mics(), 128, kRate,
                                             kAir);
}

double window_ms(const std::vector<double>& x, std::size_t begin, std::size_t end) {
    return dsp::mean_square(std::span<const double>(x).subspan(begin, end - begin));
}

} // namespace

TEST_CASE("silent primary leaves only the background noise") {
    const auto plant = reference_plant();
    FxlmsConfig cfg;
    cfg.taps = 128;
    cfg.step_size = 1e-3;
    cfg.n_secondaries = 4;
    cfg.n_errors = 4;

    SampleBuffer silence(kRate, 1, 2 * kRate);
    SimulationParams params;
    params.settle_s = 0.5;
    params.background_spl_db = 40.0;

    const auto log = run_simulation(plant, cfg, plant.secondary, silence, params);

    const double noise_rms = 20e-6 * std::pow(10.0, 40.0 / 20.0);
    for (std::size_t m = 0; m < 4; ++m) {
        const double rms = std::sqrt(dsp::mean_square(log.error[m]));
        CHECK(rms == doctest::Approx(noise_rms).epsilon(0.2));
    }
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::sqrt(dsp::mean_square(log.output[k])) < 1e-4);
}

TEST_CASE("identical seeds give bit-identical logs") {
    const auto plant = reference_plant();
    FxlmsConfig cfg;
    cfg.taps = 128;
    cfg.step_size = 1e-4;
    cfg.n_secondaries = 4;
    cfg.n_errors = 4;

    const auto tone = signals::make_tone(300.0, 1.0, 0.0, 1.5, kRate);
    SimulationParams params;
    params.noise_seed = 77;

    const auto a = run_simulation(plant, cfg, plant.secondary, tone, params);
    const auto b = run_simulation(plant, cfg, plant.secondary, tone, params);
    CHECK(a.error == b.error);
    CHECK(a.output == b.output);
    CHECK(a.desired == b.desired);
}

TEST_CASE("300 Hz tone: converged NR matches the frequency-domain optimum") {
    const auto layout = fixtures::reference_layout();
    const auto mics = fixtures::reference_mics();
    const auto plant = reference_plant();

    FxlmsConfig cfg;
    cfg.taps = 128;
    cfg.step_size = 1e-4;
    cfg.n_secondaries = 4;
    cfg.n_errors = 4;

    const double f = 300.0;
    const auto tone = signals::make_tone(f, 1.0, 0.0, 6.0, kRate);
    SimulationParams params;
    params.settle_s = 1.0;

    const auto log = run_simulation(plant, cfg, plant.secondary, tone, params);
    const std::size_t start = std::max(log.analysis_start(),
                                       log.frames() - 2 * kRate);

    // mic-side NR after convergence
    const auto row = analysis::broadband_nr(
        log.desired_buffer().slice(start, log.frames()),
        log.error_buffer().slice(start, log.frames()), analysis::Weighting::Flat,
        "tone-300", log.converged);
    CHECK(row.nr_db >= 20.0);

    // Frequency-domain benchmark over a far-field hemisphere: optimal
    // strengths for the mic grid vs the strengths the controller converged
    // to (read off W at the tone frequency).
    EvalGrid mic_grid;
    mic_grid.points = mics;
    const auto tm_mics = acoustics::transfer_matrices(layout, mic_grid, f, kAir);
    const auto opt = acoustics::optimal_source_strengths(tm_mics, {1.0, 0.0});

    // Effective strengths the controller converged to, read off the
    // steady-state y_k/x ratio at the tone. The plant subtracts s*y, so the
    // emitted strength carries a minus sign.
    std::vector<cdouble> q_time(4);
    for (std::size_t k = 0; k < 4; ++k) {
        const auto yk = dsp::measure_tone(
            std::span<const double>(log.output[k]).subspan(start, 2 * kRate), f, kRate);
        const auto xr = dsp::measure_tone(
            std::span<const double>(tone.channels[0]).subspan(start, 2 * kRate), f,
            kRate);
        q_time[k] = -(std::polar(yk.amplitude, yk.phase) /
                      std::polar(xr.amplitude, xr.phase));
    }

    const EvalGrid hemi = hemisphere_grid(layout.opening_center, 2.0, 64);
    const auto tm_hemi = acoustics::transfer_matrices(layout, hemi, f, kAir);
    auto field_nr = [&](const std::vector<cdouble>& q) {
        std::vector<cdouble> off(hemi.points.size()), on(hemi.points.size());
        for (std::size_t i = 0; i < hemi.points.size(); ++i) {
            off[i] = tm_hemi.primary[i];
            on[i] = off[i];
            for (std::size_t k = 0; k < q.size(); ++k)
                on[i] += tm_hemi.secondary(i, k) * q[k];
        }
        return acoustics::noise_reduction_db(off, on);
    };

    const double nr_optimal = field_nr(opt.strengths);
    const double nr_adaptive = field_nr(q_time);
    CHECK(std::abs(nr_adaptive - nr_optimal) <= 3.0);
}

TEST_CASE("scaling covariance: alpha on the signal, 1/alpha^2 on the step") {
    const auto plant = reference_plant();
    const double f = 250.0;
    const auto tone = signals::make_tone(f, 1.0, 0.0, 2.0, kRate);
    auto tone2 = tone;
    for (double& v : tone2.channels[0])
        v *= 2.0;

    FxlmsConfig cfg;
    cfg.taps = 64;
    cfg.step_size = 1e-4;
    cfg.n_secondaries = 4;
    cfg.n_errors = 4;
    FxlmsConfig cfg2 = cfg;
    cfg2.step_size = cfg.step_size / 4.0;

    SimulationParams params;
    params.background_spl_db = -std::numeric_limits<double>::infinity();

    const auto a = run_simulation(plant, cfg, plant.secondary, tone, params);
    const auto b = run_simulation(plant, cfg2, plant.secondary, tone2, params);

    // powers of two scale exactly in binary floating point
    bool exact = true;
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t i = 0; i < a.error[m].size(); ++i)
            exact &= b.error[m][i] == 2.0 * a.error[m][i];
    CHECK(exact);
}

TEST_CASE("halving the step size at most doubles the convergence time") {
    const auto plant = reference_plant();
    const double f = 200.0;
    const auto tone = signals::make_tone(f, 1.0, 0.0, 8.0, kRate);

    auto time_to_10db = [&](double mu) {
        FxlmsConfig cfg;
        cfg.taps = 64;
        cfg.step_size = mu;
        cfg.n_secondaries = 4;
        cfg.n_errors = 4;
        SimulationParams params;
        params.settle_s = 0.0;
        const auto log = run_simulation(plant, cfg, plant.secondary, tone, params);

        const std::size_t block = 160;  // 10 ms
        double first = -1.0;
        for (std::size_t start = 0; start + block <= log.frames(); start += block) {
            double p = 0.0;
            for (std::size_t m = 0; m < 4; ++m)
                p += window_ms(log.error[m], start, start + block);
            if (first < 0.0) {
                first = p;
                continue;
            }
            if (p <= first * 0.1)
                return static_cast<double>(start);
        }
        return static_cast<double>(log.frames());
    };

    const double t1 = time_to_10db(1e-4);
    const double t2 = time_to_10db(5e-5);
    CHECK(t2 >= t1);
    CHECK(t2 <= 4.0 * t1);
}

TEST_CASE("wiener oracle recovers a planted filter") {
    dsp::Rng rng(31);
    const std::size_t L = 8, Ls = 6;
    const auto x = signals::make_white_noise(1.0, 4.0, kRate, 51);

    std::vector<std::vector<double>> s(1, std::vector<double>(Ls));
    for (auto& v : s[0])
        v = rng.gaussian() * 0.5;
    std::vector<double> w0(L);
    for (auto& v : w0)
        v = rng.gaussian();

    // d = s * (w0 * x)
    const auto wx = dsp::fir_filter(x.channels[0], w0);
    SampleBuffer d(kRate, 1, x.frames());
    d.channels[0] = dsp::fir_filter(wx, s[0]);

    const auto sol = wiener_solution(x, d, s, 1, L);
    CHECK_FALSE(sol.regularized);
    double num = 0.0, den = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
        num += (sol.weights[0][l] - w0[l]) * (sol.weights[0][l] - w0[l]);
        den += w0[l] * w0[l];
    }
    CHECK(std::sqrt(num / den) <= 1e-6);
    CHECK(sol.residual_power <= 1e-12);
}

TEST_CASE("wiener oracle leaves uncorrelated targets alone") {
    // reference band-limited to 200-300 Hz, target at 3-4 kHz: no overlap
    const auto x = signals::make_bandlimited_noise(200.0, 300.0, 1.0, 4.0, kRate, 8);
    const auto target = signals::make_bandlimited_noise(3000.0, 4000.0, 1.0, 4.0,
                                                        kRate, 9);
    std::vector<std::vector<double>> s(1, std::vector<double>(4, 0.0));
    s[0][0] = 1.0;

    const auto sol = wiener_solution(x, target, s, 1, 8);
    const double d_power = dsp::mean_square(target.channels[0]);
    CHECK(sol.residual_power >= 0.98 * d_power);

    // the fit explains essentially none of the target
    const auto wx = dsp::fir_filter(x.channels[0], sol.weights[0]);
    CHECK(dsp::mean_square(wx) <= 0.02 * d_power);
}

TEST_CASE("converged FxLMS matches the wiener solution on a small instance") {
    dsp::Rng rng(13);
    const std::size_t L = 8, Ls = 6;
    const auto x = signals::make_white_noise(1.0, 10.0, kRate, 61);

    acoustics::PathSet plant;
    plant.sample_rate = kRate;
    plant.taps = 24;
    plant.n_secondaries = 1;
    plant.n_errors = 1;
    plant.primary.assign(1, std::vector<double>(24, 0.0));
    plant.secondary.assign(1, std::vector<double>(24, 0.0));
    for (auto& v : plant.primary[0])
        v = rng.gaussian() * 0.4;
    for (std::size_t l = 0; l < Ls; ++l)
        plant.secondary[0][l] = rng.gaussian() * 0.5;

    FxlmsConfig cfg;
    cfg.taps = L;
    cfg.step_size = 5e-4;
    cfg.n_secondaries = 1;
    cfg.n_errors = 1;

    std::vector<std::vector<double>> s_hat(
        1, std::vector<double>(plant.secondary[0].begin(),
                               plant.secondary[0].begin() + Ls));
    SimulationParams params;
    params.background_spl_db = -std::numeric_limits<double>::infinity();
    params.w_snapshot_interval = 10 * kRate;  // snapshot the final weights

    const auto log = run_simulation(plant, cfg, s_hat, x, params);
    const auto wiener = wiener_solution(x, log.desired_buffer(), s_hat, 1, L);

    REQUIRE_FALSE(log.w_snapshots.empty());
    const auto& w_final = log.w_snapshots.back().second[0];
    double num = 0.0, den = 0.0;
    for (std::size_t l = 0; l < L; ++l) {
        const double diff = w_final[l] - wiener.weights[0][l];
        num += diff * diff;
        den += wiener.weights[0][l] * wiener.weights[0][l];
    }
    CHECK(std::sqrt(num / den) <= 0.05);

    const std::size_t tail_start = log.frames() - 2 * kRate;
    double fx_res = 0.0;
    for (std::size_t i = tail_start; i < log.frames(); ++i)
        fx_res += log.error[0][i] * log.error[0][i];
    fx_res /= static_cast<double>(log.frames() - tail_start);
    CHECK(fx_res <= 1.1 * wiener.residual_power);
}
