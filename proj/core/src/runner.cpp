#include "ancsim/runner.hpp"

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "ancsim/bands.hpp"
#include "ancsim/dsp.hpp"
#include "ancsim/identify.hpp"
#include "ancsim/optimal.hpp"
#include "ancsim/path_synthesis.hpp"
#include "ancsim/radiation.hpp"
#include "ancsim/simulate.hpp"
#include "ancsim/spectrogram.hpp"
#include "ancsim/wav_io.hpp"

#ifndef ANCSIM_VERSION
#define ANCSIM_VERSION "0.0.0"
#endif

namespace ancsim::scenario {

using nlohmann::json;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + salt * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir.string() + ": " +
                      ec.message());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out)
        throw IoError("short write to " + path.string());
}

void write_band_csv(const analysis::BandSpectrum& spectrum, const std::string& hash,
                    const std::filesystem::path& path) {
    std::string csv = "# scenario_hash=" + hash + "\ncenter_hz,spl_db\n";
    for (const auto& b : spectrum.bands)
        csv += fmt(b.center_hz) + "," + fmt(b.spl_db) + "\n";
    write_text(path, csv);
}

acoustics::PathSet build_plant(const Scenario& s) {
    if (s.plant_mode == PlantMode::AnalyticFreeField)
        return acoustics::build_free_field_paths(s.layout, s.error_mics, s.plant_taps,
                                                 s.stimulus.sample_rate, s.medium);
    return acoustics::build_synthesized_paths(s.layout, s.error_mics, s.plant_taps,
                                              s.stimulus.sample_rate, s.medium,
                                              s.cavity);
}

} // namespace

RunResult run_scenario(const Scenario& scen, const RunOptions& options) {
    Scenario s = scen;
    if (options.seed_override)
        s.seed = *options.seed_override;

    {
        const auto diags = validate_scenario(s);
        for (const auto& d : diags)
            if (d.severity == Severity::Error)
                throw SchemaError("scenario: " + d.field + ": " + d.message);
    }

    const std::filesystem::path out_dir =
        options.output_dir.empty() ? std::filesystem::path("out") / s.label
                                   : options.output_dir;
    ensure_dir(out_dir);

    auto stim_spec = s.stimulus;
    if (!s.stimulus_seed_explicit)
        stim_spec.seed = mix_seed(s.seed, 1);
    const SampleBuffer stimulus = signals::render(stim_spec);

    const acoustics::PathSet plant = build_plant(s);

    std::vector<std::vector<double>> s_hat;
    double ident_error_ratio = 0.0;
    if (s.identification.exact) {
        s_hat = plant.secondary;
    } else {
        const SampleBuffer excitation = signals::make_white_noise(
            s.identification.excitation_rms_pa, s.identification.seconds,
            stim_spec.sample_rate, mix_seed(s.seed, 3));
        const auto ident = control::identify_secondary_paths(
            plant, excitation, plant.taps, s.identification.mu,
            s.identification.passes);
        s_hat = ident.s_hat;
        ident_error_ratio = ident.error_power_ratio;
    }

    control::SimulationParams params;
    params.settle_s = s.analysis.settle_s;
    params.background_spl_db = s.background_spl_db;
    params.noise_seed = mix_seed(s.seed, 2);
    params.convergence_window_s = s.analysis.convergence_window_s;

    const control::SimulationLog log =
        control::run_simulation(plant, s.controller, s_hat, stimulus, params);

    const std::size_t n = log.frames();
    const std::size_t whole_start = std::min(log.settle_samples, n);
    const std::size_t conv_start = std::min(log.analysis_start(), n);

    const SampleBuffer d_all = log.desired_buffer();
    const SampleBuffer e_all = log.error_buffer();

    RunResult result;
    result.converged = log.converged;
    result.converged_at_s =
        static_cast<double>(log.converged_at) / log.sample_rate;
    result.output_dir = out_dir;
    result.nr_whole = analysis::broadband_nr(
        d_all.slice(whole_start, n), e_all.slice(whole_start, n),
        s.analysis.weighting, s.label + " (whole run)", log.converged);
    result.nr_converged = analysis::broadband_nr(
        d_all.slice(conv_start, n), e_all.slice(conv_start, n), s.analysis.weighting,
        s.label, log.converged);

    // --- report bundle ---
    json summary;
    summary["toolkit_version"] = ANCSIM_VERSION;
    summary["scenario_hash"] = s.hash;
    summary["label"] = s.label;
    summary["seed"] = s.seed;
    summary["weighting"] = s.analysis.weighting == analysis::Weighting::A ? "a" : "flat";
    summary["converged"] = log.converged;
    summary["converged_at_s"] = result.converged_at_s;
    summary["settle_s"] = s.analysis.settle_s;
    summary["stimulus_kind"] = [&] {
        switch (s.stimulus.kind) {
        case signals::SignalKind::Tone: return "tone";
        case signals::SignalKind::Multitone: return "multitone";
        case signals::SignalKind::BandlimitedWgn: return "bandlimited_wgn";
        case signals::SignalKind::WavFile: return "wav_file";
        }
        return "unknown";
    }();
    if (!s.identification.exact)
        summary["identification_error_power_ratio"] = ident_error_ratio;
    auto row_json = [](const analysis::NrRow& r) {
        json o;
        o["label"] = r.label;
        o["spl_off_db"] = r.spl_off_db;
        o["spl_on_db"] = r.spl_on_db;
        o["nr_db"] = r.nr_db;
        o["provisional"] = r.provisional;
        return o;
    };
    summary["nr_converged"] = row_json(result.nr_converged);
    summary["nr_whole_run"] = row_json(result.nr_whole);
    result.summary_json = summary.dump(2) + "\n";
    write_text(out_dir / "summary.json", result.summary_json);

    {
        std::string csv = "# scenario_hash=" + s.hash + "\n";
        csv += "label,window,spl_off_db,spl_on_db,nr_db,provisional\n";
        csv += s.label + ",converged," + fmt(result.nr_converged.spl_off_db) + "," +
               fmt(result.nr_converged.spl_on_db) + "," + fmt(result.nr_converged.nr_db) +
               "," + (result.nr_converged.provisional ? "1" : "0") + "\n";
        csv += s.label + ",whole," + fmt(result.nr_whole.spl_off_db) + "," +
               fmt(result.nr_whole.spl_on_db) + "," + fmt(result.nr_whole.nr_db) + "," +
               (result.nr_whole.provisional ? "1" : "0") + "\n";
        write_text(out_dir / "nr.csv", csv);
    }

    if (s.analysis.band_spectra &&
        n - whole_start >= static_cast<std::size_t>(log.sample_rate)) {
        write_band_csv(analysis::third_octave_spectrum(d_all.slice(whole_start, n),
                                                       s.analysis.weighting),
                       s.hash, out_dir / "bands_off.csv");
        write_band_csv(analysis::third_octave_spectrum(e_all.slice(whole_start, n),
                                                       s.analysis.weighting),
                       s.hash, out_dir / "bands_on.csv");
    }

    if (s.analysis.spectrogram) {
        const auto [win, hop] = *s.analysis.spectrogram;
        const auto gram = analysis::make_spectrogram(stimulus, win, hop);
        std::string csv = "# scenario_hash=" + s.hash + "\ntime_s";
        for (std::size_t j = 0; j < gram.bin_count(); ++j)
            csv += "," + fmt(gram.bin_hz(j));
        csv += "\n";
        for (std::size_t i = 0; i < gram.frame_count(); ++i) {
            csv += fmt(gram.frame_time_s(i));
            for (double v : gram.magnitude[i])
                csv += "," + fmt(v);
            csv += "\n";
        }
        write_text(out_dir / "stimulus_spectrogram.csv", csv);
    }

    // Residual power trace in 100 ms blocks, per mic and pooled.
    {
        const std::size_t block = static_cast<std::size_t>(log.sample_rate / 10);
        std::string csv = "# scenario_hash=" + s.hash + "\ntime_s,pooled_db";
        for (std::size_t m = 0; m < e_all.channel_count(); ++m)
            csv += ",mic" + std::to_string(m) + "_db";
        csv += "\n";
        for (std::size_t start = 0; start + block <= n; start += block) {
            double pooled = 0.0;
            std::vector<double> per(e_all.channel_count(), 0.0);
            for (std::size_t m = 0; m < e_all.channel_count(); ++m) {
                double acc = 0.0;
                for (std::size_t i = start; i < start + block; ++i)
                    acc += e_all.channels[m][i] * e_all.channels[m][i];
                per[m] = acc / static_cast<double>(block);
                pooled += per[m];
            }
            pooled /= static_cast<double>(e_all.channel_count());
            auto to_db = [](double p) {
                return p > 0.0 ? 10.0 * std::log10(p / (analysis::kPressureRef *
                                                        analysis::kPressureRef))
                               : -999.0;
            };
            csv += fmt(static_cast<double>(start) / log.sample_rate) + "," +
                   fmt(to_db(pooled));
            for (double p : per)
                csv += "," + fmt(to_db(p));
            csv += "\n";
        }
        write_text(out_dir / "residual_power.csv", csv);
    }

    if (options.write_wavs) {
        write_wav(d_all, out_dir / "error_off.wav", WavEncoding::Float32);
        write_wav(e_all, out_dir / "error_on.wav", WavEncoding::Float32);
        SampleBuffer y;
        y.sample_rate = log.sample_rate;
        y.channels = log.output;
        write_wav(y, out_dir / "control_output.wav", WavEncoding::Float32);
    }

    return result;
}

OptimalSweep run_optimal_analysis(const Scenario& s, std::span<const double> freqs_hz) {
    const EvalGrid grid = build_eval_grid(s);
    std::vector<double> freqs(freqs_hz.begin(), freqs_hz.end());
    if (freqs.empty())
        freqs = s.optimal_freqs_hz;
    if (freqs.empty())
        throw SchemaError("scenario: optimal: no frequencies configured");

    OptimalSweep sweep;
    sweep.rows.reserve(freqs.size());
    for (double f : freqs) {
        OptimalRow row;
        row.freq_hz = f;
        const auto tm = acoustics::transfer_matrices(s.layout, grid, f, s.medium);
        std::vector<std::complex<double>> p_off(tm.primary.size());
        for (std::size_t i = 0; i < tm.primary.size(); ++i)
            p_off[i] = tm.primary[i] * s.layout.primary.strength;
        try {
            const auto opt = acoustics::optimal_source_strengths(
                tm, s.layout.primary.strength);
            row.condition = opt.condition_number;
            std::vector<std::complex<double>> p_on = p_off;
            for (std::size_t i = 0; i < p_on.size(); ++i)
                for (std::size_t k = 0; k < opt.strengths.size(); ++k)
                    p_on[i] += tm.secondary(i, k) * opt.strengths[k];
            row.nr_db = acoustics::noise_reduction_db(p_off, p_on);
        } catch (const IllPosedControlError& e) {
            row.ill_posed = true;
            row.condition = e.condition_number();
            row.nr_db = std::numeric_limits<double>::quiet_NaN();
        }
        sweep.rows.push_back(row);
    }
    return sweep;
}

void write_optimal_csv(const OptimalSweep& sweep, const std::string& scenario_hash,
                       const std::filesystem::path& path) {
    std::string csv = "# scenario_hash=" + scenario_hash + "\n";
    csv += "freq_hz,nr_optimal_db,condition_number,ill_posed\n";
    for (const auto& r : sweep.rows) {
        csv += fmt(r.freq_hz) + ",";
        csv += r.ill_posed ? "" : fmt(r.nr_db);
        csv += "," + fmt(r.condition) + "," + (r.ill_posed ? "1" : "0") + "\n";
    }
    write_text(path, csv);
}

SweepResult run_tonal_sweep(const Scenario& base, std::span<const double> tones_hz,
                            int jobs, const RunOptions& options) {
    if (tones_hz.empty())
        throw SchemaError("sweep: no tone frequencies given");
    if (jobs < 1)
        jobs = 1;

    const std::filesystem::path out_dir =
        options.output_dir.empty() ? std::filesystem::path("out") / (base.label + "-sweep")
                                   : options.output_dir;
    ensure_dir(out_dir);

    const double amplitude = base.stimulus.kind == signals::SignalKind::Tone
                                 ? base.stimulus.amplitude_pa
                                 : 1.0;

    SweepResult result;
    result.output_dir = out_dir;
    result.rows.resize(tones_hz.size());

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto worker = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tones_hz.size())
                return;
            try {
                Scenario tone = base;
                tone.stimulus.kind = signals::SignalKind::Tone;
                tone.stimulus.freq_hz = tones_hz[i];
                tone.stimulus.amplitude_pa = amplitude;
                tone.stimulus.phase_rad = 0.0;
                tone.stimulus.tones.clear();
                const int f_int = static_cast<int>(std::lround(tones_hz[i]));
                tone.label = base.label + "-tone-" + std::to_string(f_int);

                RunOptions ro;
                ro.output_dir = out_dir / ("tone-" + std::to_string(f_int));
                ro.seed_override = options.seed_override;
                ro.write_wavs = options.write_wavs;
                const RunResult rr = run_scenario(tone, ro);

                result.rows[i].freq_hz = tones_hz[i];
                result.rows[i].nr = rr.nr_converged;
                result.rows[i].converged = rr.converged;
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                return;
            }
        }
    };

    const int n_workers = std::min<int>(jobs, static_cast<int>(tones_hz.size()));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);

    std::string csv = "# scenario_hash=" + base.hash + "\n";
    csv += "freq_hz,spl_off_db,spl_on_db,nr_db,converged\n";
    for (const auto& r : result.rows)
        csv += fmt(r.freq_hz) + "," + fmt(r.nr.spl_off_db) + "," + fmt(r.nr.spl_on_db) +
               "," + fmt(r.nr.nr_db) + "," + (r.converged ? "1" : "0") + "\n";
    write_text(out_dir / "nr_sweep.csv", csv);

    return result;
}

} // namespace ancsim::scenario
