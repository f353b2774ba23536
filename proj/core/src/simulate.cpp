#include "ancsim/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "ancsim/dsp.hpp"

namespace ancsim::control {

namespace {

struct Ring {
    std::vector<double> buf;
    std::size_t mask = 0;
    std::size_t head = 0;

    void init(std::size_t min_capacity) {
        std::size_t cap = 1;
        while (cap < min_capacity)
            cap <<= 1;
        buf.assign(cap, 0.0);
        mask = cap - 1;
    }
    void push(double v) {
        head = (head + 1) & mask;
        buf[head] = v;
    }
    double at_lag(std::size_t lag) const { return buf[(head - lag) & mask]; }
};

} // namespace

SampleBuffer SimulationLog::desired_buffer() const {
    SampleBuffer b;
    b.sample_rate = sample_rate;
    b.channels = desired;
    return b;
}

SampleBuffer SimulationLog::error_buffer() const {
    SampleBuffer b;
    b.sample_rate = sample_rate;
    b.channels = error;
    return b;
}

std::size_t SimulationLog::analysis_start() const {
    return converged ? std::max(settle_samples, converged_at) : settle_samples;
}

SimulationLog run_simulation(const acoustics::PathSet& paths, const FxlmsConfig& config,
                             const std::vector<std::vector<double>>& s_hat,
                             const SampleBuffer& primary, const SimulationParams& params) {
    paths.validate();
    config.validate();
    primary.validate();
    if (primary.channel_count() != 1)
        throw DomainError("run_simulation: primary signal must be single-channel");
    if (primary.sample_rate != paths.sample_rate)
        throw DomainError("run_simulation: primary/paths sample rate mismatch");
    if (paths.n_secondaries != config.n_secondaries ||
        paths.n_errors != config.n_errors)
        throw DomainError("run_simulation: PathSet channel counts must match config");

    const std::size_t K = config.n_secondaries;
    const std::size_t M = config.n_errors;
    const auto& x = primary.channels[0];
    const std::size_t n = x.size();
    const int rate = primary.sample_rate;

    FxlmsController controller(config, s_hat);

    Ring x_plant;
    x_plant.init(paths.taps);
    std::vector<Ring> y_plant(K);
    for (auto& r : y_plant)
        r.init(paths.taps);

    std::optional<Ring> x_ref_ring;
    if (params.reference && !params.reference->fir.empty()) {
        x_ref_ring.emplace();
        x_ref_ring->init(params.reference->fir.size());
    }

    // 0 dB SPL = 20 uPa rms
    const double noise_rms =
        20e-6 * std::pow(10.0, params.background_spl_db / 20.0);
    dsp::Rng noise(params.noise_seed);
    std::optional<dsp::Rng> ref_noise;
    if (params.reference && params.reference->noise_rms > 0.0)
        ref_noise.emplace(params.reference->noise_seed);

    SimulationLog log;
    log.sample_rate = rate;
    log.settle_samples = static_cast<std::size_t>(
        std::llround(std::max(0.0, params.settle_s) * rate));
    log.desired.assign(M, std::vector<double>(n, 0.0));
    log.error.assign(M, std::vector<double>(n, 0.0));
    log.output.assign(K, std::vector<double>(n, 0.0));

    std::vector<double> e(M, 0.0);

    const std::size_t window = static_cast<std::size_t>(
        std::llround(params.convergence_window_s * rate));
    double win_acc = 0.0;
    std::size_t win_fill = 0;
    double prev_win_power = -1.0;
    std::size_t win_start = log.settle_samples;

    for (std::size_t i = 0; i < n; ++i) {
        x_plant.push(x[i]);

        double x_ref = x[i];
        if (params.reference) {
            if (x_ref_ring) {
                x_ref_ring->push(x[i]);
                const auto& fir = params.reference->fir;
                double acc = 0.0;
                for (std::size_t l = 0; l < fir.size(); ++l)
                    acc += fir[l] * x_ref_ring->at_lag(l);
                x_ref = acc;
            }
            if (ref_noise)
                x_ref += params.reference->noise_rms * ref_noise->gaussian();
        }

        const auto y = controller.advance(x_ref);
        for (std::size_t k = 0; k < K; ++k) {
            y_plant[k].push(y[k]);
            log.output[k][i] = y[k];
        }

        double e_power = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            const auto& pm = paths.primary[m];
            double d = 0.0;
            for (std::size_t l = 0; l < paths.taps; ++l)
                d += pm[l] * x_plant.at_lag(l);
            d += noise_rms * noise.gaussian();

            double cancel = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                const auto& skm = paths.secondary_ir(k, m);
                const auto& yk = y_plant[k];
                for (std::size_t l = 0; l < paths.taps; ++l)
                    cancel += skm[l] * yk.at_lag(l);
            }
            const double em = d - cancel;
            log.desired[m][i] = d;
            log.error[m][i] = em;
            e[m] = em;
            e_power += em * em;
        }

        controller.adapt(e);

        if (params.w_snapshot_interval > 0 &&
            (i + 1) % params.w_snapshot_interval == 0)
            log.w_snapshots.emplace_back(i, controller.weights());

        // Convergence: consecutive windows after the settle period whose
        // mean residual power differs by less than the threshold.
        if (!log.converged && window > 0 && i >= log.settle_samples) {
            win_acc += e_power / static_cast<double>(M);
            ++win_fill;
            if (win_fill == window) {
                const double win_power = win_acc / static_cast<double>(window);
                if (prev_win_power > 0.0 && win_power > 0.0) {
                    const double delta_db =
                        std::abs(10.0 * std::log10(win_power / prev_win_power));
                    if (delta_db < params.convergence_delta_db) {
                        log.converged = true;
                        log.converged_at = win_start;
                    }
                }
                prev_win_power = win_power;
                win_start = i + 1;
                win_acc = 0.0;
                win_fill = 0;
            }
        }
    }

    return log;
}

} // namespace ancsim::control
