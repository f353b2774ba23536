// ancsim: scenario-driven virtual-sound-barrier ANC simulation runner.
//
// Verbs:
//   run       closed-loop FxLMS simulation, full report bundle
//   optimal   frequency-domain optimal-control NR sweep
//   validate  schema + geometry + stability diagnostics
//   sweep     tonal sweep, one closed-loop run per tone

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ancsim/errors.hpp"
#include "ancsim/runner.hpp"
#include "ancsim/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitSchema = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;

std::vector<double> parse_range(const std::string& text) {
    // "lo:hi:step" or a comma list
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double lo = 0.0, hi = 0.0, step = 0.0;
        if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
            step <= 0.0 || hi < lo)
            throw ancsim::SchemaError("bad range '" + text + "', expected lo:hi:step");
        for (double f = lo; f <= hi + 1e-9; f += step)
            out.push_back(f);
        return out;
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t next = text.find(',', pos);
        if (next == std::string::npos)
            next = text.size();
        out.push_back(std::stod(text.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

int guarded(int (*body)(void*), void* ctx) {
    try {
        return body(ctx);
    } catch (const ancsim::SchemaError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSchema;
    } catch (const ancsim::DivergenceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDivergence;
    } catch (const ancsim::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitFailure;
    }
}

struct Args {
    std::string scenario_path;
    std::string output_dir;
    std::uint64_t seed = 0;
    bool have_seed = false;
    bool no_wavs = false;
    std::string freqs;
    std::string tones = "50:650:50";
    int jobs = 1;
};

ancsim::scenario::RunOptions make_options(const Args& a) {
    ancsim::scenario::RunOptions opts;
    if (!a.output_dir.empty())
        opts.output_dir = a.output_dir;
    if (a.have_seed)
        opts.seed_override = a.seed;
    opts.write_wavs = !a.no_wavs;
    return opts;
}

int cmd_run(void* ctx) {
    const Args& a = *static_cast<Args*>(ctx);
    const auto scen = ancsim::scenario::load_scenario(a.scenario_path);
    const auto result = ancsim::scenario::run_scenario(scen, make_options(a));
    std::printf("%s: NR %.2f dB (converged window), %.2f dB (whole run)%s\n",
                scen.label.c_str(), result.nr_converged.nr_db, result.nr_whole.nr_db,
                result.converged ? "" : " [not converged]");
    std::printf("reports written to %s\n", result.output_dir.string().c_str());
    return kExitOk;
}

int cmd_optimal(void* ctx) {
    const Args& a = *static_cast<Args*>(ctx);
    const auto scen = ancsim::scenario::load_scenario(a.scenario_path);
    std::vector<double> freqs;
    if (!a.freqs.empty())
        freqs = parse_range(a.freqs);
    const auto sweep = ancsim::scenario::run_optimal_analysis(scen, freqs);

    std::filesystem::path out = a.output_dir.empty()
                                    ? std::filesystem::path("out") / scen.label
                                    : std::filesystem::path(a.output_dir);
    std::filesystem::create_directories(out);
    const auto csv_path = out / "optimal_nr.csv";
    ancsim::scenario::write_optimal_csv(sweep, scen.hash, csv_path);

    for (const auto& row : sweep.rows) {
        if (row.ill_posed)
            std::printf("%8.1f Hz  ill-posed (condition %.3g)\n", row.freq_hz,
                        row.condition);
        else
            std::printf("%8.1f Hz  NR %7.2f dB  (condition %.3g)\n", row.freq_hz,
                        row.nr_db, row.condition);
    }
    std::printf("written to %s\n", csv_path.string().c_str());
    return kExitOk;
}

int cmd_validate(void* ctx) {
    const Args& a = *static_cast<Args*>(ctx);
    const auto diags = ancsim::scenario::validate_file(a.scenario_path);
    bool errors = false, warnings = false;
    for (const auto& d : diags) {
        const bool is_error = d.severity == ancsim::scenario::Severity::Error;
        errors |= is_error;
        warnings |= !is_error;
        std::printf("%s: %s: %s\n", is_error ? "error" : "warning", d.field.c_str(),
                    d.message.c_str());
    }
    if (diags.empty())
        std::printf("%s: ok\n", a.scenario_path.c_str());
    if (errors)
        return kExitSchema;
    return warnings ? kExitFailure : kExitOk;
}

int cmd_sweep(void* ctx) {
    const Args& a = *static_cast<Args*>(ctx);
    const auto scen = ancsim::scenario::load_scenario(a.scenario_path);
    const auto tones = parse_range(a.tones);
    const auto result =
        ancsim::scenario::run_tonal_sweep(scen, tones, a.jobs, make_options(a));
    for (const auto& row : result.rows)
        std::printf("%8.1f Hz  NR %7.2f dB%s\n", row.freq_hz, row.nr.nr_db,
                    row.converged ? "" : " [not converged]");
    std::printf("sweep written to %s\n", result.output_dir.string().c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Virtual sound barrier ANC simulation toolkit"};
    app.require_subcommand(1);

    Args args;
    auto add_common = [&args](CLI::App* cmd) {
        cmd->add_option("scenario", args.scenario_path, "Scenario JSON file")
            ->required();
        cmd->add_option("--out", args.output_dir, "Output directory");
        cmd->add_option("--seed", args.seed, "Override the scenario seed")
            ->each([&args](const std::string&) { args.have_seed = true; });
        cmd->add_flag("--no-wavs", args.no_wavs, "Skip WAV exports");
    };

    auto* run = app.add_subcommand("run", "Run the closed-loop simulation");
    add_common(run);

    auto* optimal = app.add_subcommand("optimal", "Frequency-domain optimal NR");
    add_common(optimal);
    optimal->add_option("--freqs", args.freqs,
                        "Frequencies, lo:hi:step or comma list (default: scenario)");

    auto* validate = app.add_subcommand("validate", "Check a scenario file");
    validate->add_option("scenario", args.scenario_path, "Scenario JSON file")
        ->required();

    auto* sweep = app.add_subcommand("sweep", "Tonal sweep");
    add_common(sweep);
    sweep->add_option("--tones", args.tones, "Tones, lo:hi:step (default 50:650:50)");
    sweep->add_option("--jobs", args.jobs, "Parallel workers (default 1)");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed())
        return guarded(cmd_run, &args);
    if (optimal->parsed())
        return guarded(cmd_optimal, &args);
    if (validate->parsed())
        return guarded(cmd_validate, &args);
    if (sweep->parsed())
        return guarded(cmd_sweep, &args);
    return kExitFailure;
}
