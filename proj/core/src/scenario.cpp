#include "ancsim/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ancsim/dsp.hpp"
#include "ancsim/identify.hpp"
#include "ancsim/path_synthesis.hpp"
#include "ancsim/signal_gen.hpp"

namespace ancsim::scenario {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw SchemaError("scenario: " + field + ": " + message);
}

const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object())
        fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        fail(path.empty() ? key : path + "." + key, "missing required field");
    return *it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number())
        fail(path, "expected a number");
    return v.get<double>();
}

double positive(const json& v, const std::string& path) {
    const double x = number(v, path);
    if (!(x > 0.0))
        fail(path, "must be positive");
    return x;
}

int integer(const json& v, const std::string& path) {
    if (!v.is_number_integer())
        fail(path, "expected an integer");
    return v.get<int>();
}

std::string text(const json& v, const std::string& path) {
    if (!v.is_string())
        fail(path, "expected a string");
    return v.get<std::string>();
}

Vec3 vec3(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3)
        fail(path, "expected [x, y, z]");
    return {number(v[0], path + "[0]"), number(v[1], path + "[1]"),
            number(v[2], path + "[2]")};
}

template <typename T>
T value_or(const json& obj, const std::string& key, T def) {
    if (!obj.is_object())
        return def;
    auto it = obj.find(key);
    if (it == obj.end())
        return def;
    return it->get<T>();
}

signals::SignalSpec parse_stimulus(const json& j, bool& seed_explicit) {
    signals::SignalSpec spec;
    const std::string kind = text(require(j, "kind", "stimulus"), "stimulus.kind");
    spec.duration_s = positive(require(j, "duration_s", "stimulus"), "stimulus.duration_s");
    spec.sample_rate =
        integer(require(j, "sample_rate", "stimulus"), "stimulus.sample_rate");
    if (spec.sample_rate <= 0)
        fail("stimulus.sample_rate", "must be positive");

    seed_explicit = j.contains("seed");
    spec.seed = value_or<std::uint64_t>(j, "seed", 0);

    if (kind == "tone") {
        spec.kind = signals::SignalKind::Tone;
        spec.freq_hz = positive(require(j, "freq_hz", "stimulus"), "stimulus.freq_hz");
        spec.amplitude_pa = value_or<double>(j, "amplitude_pa", 1.0);
        spec.phase_rad = value_or<double>(j, "phase_rad", 0.0);
        if (spec.freq_hz >= spec.sample_rate / 2.0)
            fail("stimulus.freq_hz", "at or above Nyquist");
    } else if (kind == "multitone") {
        spec.kind = signals::SignalKind::Multitone;
        const json& tones = require(j, "tones", "stimulus");
        if (!tones.is_array() || tones.empty())
            fail("stimulus.tones", "expected a non-empty array");
        for (std::size_t i = 0; i < tones.size(); ++i) {
            const std::string p = "stimulus.tones[" + std::to_string(i) + "]";
            signals::ToneComponent c;
            c.freq_hz = positive(require(tones[i], "freq_hz", p), p + ".freq_hz");
            c.amplitude_pa = value_or<double>(tones[i], "amplitude_pa", 1.0);
            c.phase_rad = value_or<double>(tones[i], "phase_rad", 0.0);
            spec.tones.push_back(c);
        }
    } else if (kind == "bandlimited_wgn") {
        spec.kind = signals::SignalKind::BandlimitedWgn;
        spec.low_hz = positive(require(j, "low_hz", "stimulus"), "stimulus.low_hz");
        spec.high_hz = positive(require(j, "high_hz", "stimulus"), "stimulus.high_hz");
        spec.rms_pa = value_or<double>(j, "rms_pa", 1.0);
        if (!(spec.low_hz < spec.high_hz && spec.high_hz < spec.sample_rate / 2.0))
            fail("stimulus", "need 0 < low_hz < high_hz < Nyquist");
    } else if (kind == "wav_file") {
        spec.kind = signals::SignalKind::WavFile;
        spec.path = text(require(j, "path", "stimulus"), "stimulus.path");
        if (!std::filesystem::exists(spec.path))
            fail("stimulus.path", "file does not exist: " + spec.path);
    } else {
        fail("stimulus.kind", "unknown kind '" + kind + "'");
    }
    return spec;
}

} // namespace

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Scenario parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("scenario: invalid JSON: ") + e.what());
    }

    Scenario s;
    s.version = integer(require(j, "version", ""), "version");
    if (s.version != 1)
        fail("version", "unsupported schema version " + std::to_string(s.version));
    s.label = text(require(j, "label", ""), "label");
    s.seed = value_or<std::uint64_t>(j, "seed", 1);

    if (j.contains("medium")) {
        const json& m = j["medium"];
        s.medium.c0 = value_or<double>(m, "c0", 343.0);
        s.medium.rho0 = value_or<double>(m, "rho0", 1.21);
        if (s.medium.c0 <= 0.0)
            fail("medium.c0", "must be positive");
        if (s.medium.rho0 <= 0.0)
            fail("medium.rho0", "must be positive");
    }

    const json& cav = require(j, "cavity", "");
    s.cavity.lx = positive(require(cav, "lx", "cavity"), "cavity.lx");
    s.cavity.ly = positive(require(cav, "ly", "cavity"), "cavity.ly");
    s.cavity.lz = positive(require(cav, "lz", "cavity"), "cavity.lz");
    s.cavity.n_max = value_or<int>(cav, "n_max", 10);
    s.cavity.m_max = value_or<int>(cav, "m_max", 10);
    if (s.cavity.n_max < 0 || s.cavity.m_max < 0)
        fail("cavity", "truncation orders must be >= 0");

    const json& lay = require(j, "layout", "");
    s.layout.opening_center = vec3(require(lay, "opening_center", "layout"),
                                   "layout.opening_center");
    s.layout.opening_lx = positive(require(lay, "opening_lx", "layout"),
                                   "layout.opening_lx");
    s.layout.opening_lz = positive(require(lay, "opening_lz", "layout"),
                                   "layout.opening_lz");
    const json& prim = require(lay, "primary", "layout");
    s.layout.primary.position = vec3(require(prim, "position", "layout.primary"),
                                     "layout.primary.position");
    if (prim.contains("strength")) {
        const json& st = prim["strength"];
        if (!st.is_array() || st.size() != 2)
            fail("layout.primary.strength", "expected [re, im]");
        s.layout.primary.strength = {number(st[0], "layout.primary.strength[0]"),
                                     number(st[1], "layout.primary.strength[1]")};
    }
    const json& secs = require(lay, "secondaries", "layout");
    if (!secs.is_array() || secs.empty())
        fail("layout.secondaries", "expected a non-empty array");
    for (std::size_t i = 0; i < secs.size(); ++i) {
        const std::string p = "layout.secondaries[" + std::to_string(i) + "]";
        PointSource src;
        src.position = vec3(require(secs[i], "position", p), p + ".position");
        s.layout.secondaries.push_back(src);
    }

    const json& mics = require(j, "error_mics", "");
    if (!mics.is_array() || mics.empty())
        fail("error_mics", "expected a non-empty array");
    for (std::size_t i = 0; i < mics.size(); ++i)
        s.error_mics.push_back(vec3(mics[i], "error_mics[" + std::to_string(i) + "]"));

    if (j.contains("eval_grid")) {
        const json& g = j["eval_grid"];
        const std::string type = text(require(g, "type", "eval_grid"), "eval_grid.type");
        if (type == "hemisphere") {
            s.eval_grid.hemisphere = true;
            s.eval_grid.radius = positive(require(g, "radius", "eval_grid"),
                                          "eval_grid.radius");
            s.eval_grid.count = integer(require(g, "count", "eval_grid"),
                                        "eval_grid.count");
            if (s.eval_grid.count < 1)
                fail("eval_grid.count", "must be >= 1");
        } else if (type == "points") {
            s.eval_grid.hemisphere = false;
            const json& pts = require(g, "points", "eval_grid");
            if (!pts.is_array() || pts.empty())
                fail("eval_grid.points", "expected a non-empty array");
            for (std::size_t i = 0; i < pts.size(); ++i)
                s.eval_grid.points.push_back(
                    vec3(pts[i], "eval_grid.points[" + std::to_string(i) + "]"));
        } else {
            fail("eval_grid.type", "expected 'hemisphere' or 'points'");
        }
    }

    const json& plant = require(j, "plant", "");
    const std::string mode = text(require(plant, "mode", "plant"), "plant.mode");
    if (mode == "analytic-freefield")
        s.plant_mode = PlantMode::AnalyticFreeField;
    else if (mode == "modal-synthesized")
        s.plant_mode = PlantMode::ModalSynthesized;
    else
        fail("plant.mode", "expected 'analytic-freefield' or 'modal-synthesized'");
    s.plant_taps = static_cast<std::size_t>(value_or<int>(plant, "taps", 128));
    if (s.plant_taps == 0)
        fail("plant.taps", "must be >= 1");
    if (plant.contains("identification")) {
        const json& ident = plant["identification"];
        const std::string imode =
            text(require(ident, "mode", "plant.identification"),
                 "plant.identification.mode");
        if (imode == "exact") {
            s.identification.exact = true;
        } else if (imode == "lms") {
            s.identification.exact = false;
            s.identification.mu = value_or<double>(ident, "mu", 0.002);
            s.identification.passes = value_or<int>(ident, "passes", 1);
            s.identification.seconds = value_or<double>(ident, "seconds", 10.0);
            s.identification.excitation_rms_pa =
                value_or<double>(ident, "excitation_rms_pa", 1.0);
            if (s.identification.mu <= 0.0)
                fail("plant.identification.mu", "must be positive");
            if (s.identification.passes < 1)
                fail("plant.identification.passes", "must be >= 1");
        } else {
            fail("plant.identification.mode", "expected 'exact' or 'lms'");
        }
    }

    const json& ctl = require(j, "controller", "");
    s.controller.taps =
        static_cast<std::size_t>(integer(require(ctl, "taps", "controller"),
                                         "controller.taps"));
    s.controller.step_size = positive(require(ctl, "step_size", "controller"),
                                      "controller.step_size");
    s.controller.leakage = value_or<double>(ctl, "leakage", 0.0);
    if (s.controller.leakage < 0.0 || s.controller.leakage > 1.0)
        fail("controller.leakage", "must be in [0, 1]");
    if (ctl.contains("output_limit"))
        s.controller.output_limit = positive(ctl["output_limit"], "controller.output_limit");
    s.controller.n_secondaries = s.layout.secondaries.size();
    s.controller.n_errors = s.error_mics.size();

    s.stimulus = parse_stimulus(require(j, "stimulus", ""), s.stimulus_seed_explicit);
    s.background_spl_db = value_or<double>(j, "background_spl_db", 40.0);

    if (j.contains("analysis")) {
        const json& an = j["analysis"];
        const std::string w = value_or<std::string>(an, "weighting", "flat");
        if (w == "flat")
            s.analysis.weighting = analysis::Weighting::Flat;
        else if (w == "a")
            s.analysis.weighting = analysis::Weighting::A;
        else
            fail("analysis.weighting", "expected 'flat' or 'a'");
        s.analysis.settle_s = value_or<double>(an, "settle_s", 1.0);
        s.analysis.convergence_window_s =
            value_or<double>(an, "convergence_window_s", 0.5);
        s.analysis.band_spectra = value_or<bool>(an, "band_spectra", true);
        if (an.contains("spectrogram")) {
            const json& sp = an["spectrogram"];
            const int win = value_or<int>(sp, "window", 1024);
            const int hop = value_or<int>(sp, "hop", 512);
            if (hop < 1 || win < hop)
                fail("analysis.spectrogram", "need window >= hop >= 1");
            s.analysis.spectrogram = {static_cast<std::size_t>(win),
                                      static_cast<std::size_t>(hop)};
        }
        if (s.analysis.settle_s < 0.0)
            fail("analysis.settle_s", "must be >= 0");
    }

    if (j.contains("optimal")) {
        const json& opt = j["optimal"];
        if (opt.contains("freqs_hz")) {
            for (const auto& f : opt["freqs_hz"])
                s.optimal_freqs_hz.push_back(positive(f, "optimal.freqs_hz[]"));
        } else if (opt.contains("sweep")) {
            const json& sw = opt["sweep"];
            const double from = positive(require(sw, "from", "optimal.sweep"),
                                         "optimal.sweep.from");
            const double to = positive(require(sw, "to", "optimal.sweep"),
                                       "optimal.sweep.to");
            const double step = positive(require(sw, "step", "optimal.sweep"),
                                         "optimal.sweep.step");
            if (to < from)
                fail("optimal.sweep", "'to' must be >= 'from'");
            for (double f = from; f <= to + 1e-9; f += step)
                s.optimal_freqs_hz.push_back(f);
        }
    }

    // Canonical-form hash: whitespace and key order insensitive.
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(j.dump())));
    s.hash = hex;
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open scenario file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

EvalGrid build_eval_grid(const Scenario& s) {
    if (s.eval_grid.hemisphere)
        return hemisphere_grid(s.layout.opening_center, s.eval_grid.radius,
                               s.eval_grid.count);
    EvalGrid g;
    g.points = s.eval_grid.points;
    g.validate();
    return g;
}

std::vector<Diagnostic> validate_scenario(const Scenario& s) {
    std::vector<Diagnostic> out;
    auto error = [&out](const std::string& field, const std::string& msg) {
        out.push_back({Severity::Error, field, msg});
    };
    auto warning = [&out](const std::string& field, const std::string& msg) {
        out.push_back({Severity::Warning, field, msg});
    };

    const double plane = s.layout.baffle_y();
    for (std::size_t i = 0; i < s.layout.secondaries.size(); ++i)
        if (std::abs(s.layout.secondaries[i].position.y - plane) > 1e-9)
            error("layout.secondaries[" + std::to_string(i) + "]",
                  "secondary must lie on the opening plane y = " + std::to_string(plane));

    const auto& p = s.layout.primary.position;
    if (p.x < 0.0 || p.x > s.cavity.lx || p.y < 0.0 || p.y > s.cavity.ly || p.z < 0.0 ||
        p.z > s.cavity.lz) {
        if (s.plant_mode == PlantMode::ModalSynthesized)
            error("layout.primary.position", "primary must sit inside the cavity");
        else
            warning("layout.primary.position", "primary outside the cavity interior");
    }

    for (std::size_t i = 0; i < s.error_mics.size(); ++i) {
        const auto& m = s.error_mics[i];
        const std::string field = "error_mics[" + std::to_string(i) + "]";
        if (m.y < plane - 1e-9)
            error(field, "error microphone behind the baffle plane");
        for (const auto& sec : s.layout.secondaries)
            if (distance(m, sec.position) < 1e-6)
                error(field, "error microphone coincides with a secondary source");
        if (distance(m, s.layout.opening_center) < 1e-6)
            error(field, "error microphone coincides with the equivalent primary");
    }

    if (s.stimulus.kind == signals::SignalKind::Tone &&
        s.stimulus.freq_hz >= s.stimulus.sample_rate / 2.0)
        error("stimulus.freq_hz", "at or above Nyquist");

    if (s.controller.taps == 0)
        error("controller.taps", "must be >= 1");

    // Stability estimate from the filtered-reference power of a short
    // stimulus prefix through the true secondary paths.
    try {
        auto probe_spec = s.stimulus;
        probe_spec.duration_s = std::min(probe_spec.duration_s, 2.0);
        if (!s.stimulus_seed_explicit)
            probe_spec.seed = s.seed * 0x9e3779b97f4a7c15ULL + 1;
        const SampleBuffer probe = signals::render(probe_spec);
        acoustics::PathSet paths;
        if (s.plant_mode == PlantMode::AnalyticFreeField)
            paths = acoustics::build_free_field_paths(s.layout, s.error_mics,
                                                      s.plant_taps,
                                                      s.stimulus.sample_rate, s.medium);
        else
            paths = acoustics::build_synthesized_paths(s.layout, s.error_mics,
                                                       s.plant_taps,
                                                       s.stimulus.sample_rate, s.medium,
                                                       s.cavity);
        double power = 0.0;
        std::size_t count = 0;
        for (std::size_t k = 0; k < paths.n_secondaries; ++k)
            for (std::size_t m = 0; m < paths.n_errors; ++m) {
                const auto filtered =
                    dsp::fir_filter(probe.channels[0], paths.secondary_ir(k, m));
                power += dsp::mean_square(filtered);
                ++count;
            }
        power /= static_cast<double>(count);
        const double bound = control::stability_step_bound(s.controller.taps, power);
        if (s.controller.step_size >= bound)
            warning("controller.step_size",
                    "step size " + std::to_string(s.controller.step_size) +
                        " is at or above the stability estimate mu_max = " +
                        std::to_string(bound));
    } catch (const std::exception& e) {
        error("plant", std::string("cannot build plant for stability check: ") +
                           e.what());
    }

    return out;
}

std::vector<Diagnostic> validate_file(const std::filesystem::path& path) {
    try {
        const Scenario s = load_scenario(path);
        return validate_scenario(s);
    } catch (const std::exception& e) {
        return {{Severity::Error, "(file)", e.what()}};
    }
}

} // namespace ancsim::scenario
