#include "ancsim/path_synthesis.hpp"

#include <cmath>

#include "ancsim/dsp.hpp"
#include "ancsim/modal.hpp"
#include "ancsim/radiation.hpp"

namespace ancsim::acoustics {

using dsp::kPi;
using cdouble = std::complex<double>;

void PathSet::validate() const {
    if (sample_rate <= 0)
        throw DomainError("PathSet: sample_rate must be positive");
    if (taps == 0)
        throw DomainError("PathSet: taps must be >= 1");
    if (primary.size() != n_errors || secondary.size() != n_secondaries * n_errors)
        throw DomainError("PathSet: channel counts inconsistent");
    auto check = [this](const std::vector<double>& h) {
        if (h.size() != taps)
            throw DomainError("PathSet: impulse response length mismatch");
        for (double v : h)
            if (!std::isfinite(v))
                throw DomainError("PathSet: non-finite impulse response coefficient");
    };
    for (const auto& h : primary)
        check(h);
    for (const auto& h : secondary)
        check(h);
}

std::vector<double> fir_from_frequency_response(std::span<const cdouble> response,
                                                std::size_t taps, int sample_rate) {
    if (sample_rate <= 0)
        throw DomainError("fir_from_frequency_response: sample_rate must be positive");
    if (response.size() < 2)
        throw DomainError("fir_from_frequency_response: need at least two grid points");
    const std::size_t full = 2 * (response.size() - 1);
    if (taps == 0 || taps > full)
        throw DomainError("fir_from_frequency_response: taps must be in [1, 2*(grid-1)]");
    for (const auto& h : response)
        if (!std::isfinite(h.real()) || !std::isfinite(h.imag()))
            throw DomainError("fir_from_frequency_response: non-finite response entry");

    // DC and Nyquist bins must be real for a real impulse response.
    std::vector<cdouble> spec(response.begin(), response.end());
    spec.front() = cdouble(spec.front().real(), 0.0);
    spec.back() = cdouble(spec.back().real(), 0.0);

    const auto zero_phase = dsp::ifft_real(spec, full);

    // Circular shift by taps/2 makes the response causal; the Hann tapers
    // only touch the outer eighth at each end so in-window content keeps
    // its gain while the truncation edges stay smooth.
    const std::size_t delay = taps / 2;
    const std::size_t taper = std::max<std::size_t>(1, taps / 8);
    std::vector<double> h(taps);
    for (std::size_t n = 0; n < taps; ++n) {
        const std::size_t src = (n + full - delay) % full;
        double w = 1.0;
        if (n < taper)
            w = 0.5 * (1.0 - std::cos(kPi * static_cast<double>(n) /
                                      static_cast<double>(taper)));
        else if (n + 1 > taps - taper)
            w = 0.5 * (1.0 - std::cos(kPi * static_cast<double>(taps - 1 - n) /
                                      static_cast<double>(taper)));
        h[n] = zero_phase[src] * w;
    }
    return h;
}

std::vector<double> free_field_fir(double distance_m, double gain, std::size_t taps,
                                   int sample_rate, const Medium& medium) {
    medium.validate();
    if (distance_m <= 0.0)
        throw DomainError("free_field_fir: distance must be positive");
    if (taps == 0)
        throw DomainError("free_field_fir: taps must be >= 1");

    constexpr int kHalfWidth = 8;  // 16-point interpolator
    const double delay = distance_m * sample_rate / medium.c0;
    if (delay + kHalfWidth >= static_cast<double>(taps))
        throw DomainError("free_field_fir: propagation delay of " +
                          std::to_string(delay) + " samples exceeds the tap budget");

    const double amp = gain / (4.0 * kPi * distance_m);
    std::vector<double> h(taps, 0.0);
    const auto lo = static_cast<std::size_t>(
        std::max(0.0, std::ceil(delay - kHalfWidth)));
    const auto hi = static_cast<std::size_t>(std::floor(delay + kHalfWidth));
    for (std::size_t n = lo; n <= hi && n < taps; ++n) {
        const double t = static_cast<double>(n) - delay;
        const double w = 0.5 * (1.0 + std::cos(kPi * t / kHalfWidth));
        h[n] = amp * dsp::sinc(t) * w;
    }
    return h;
}

namespace {

void check_mics(const SourceLayout& layout, std::span<const Vec3> mics) {
    layout.validate();
    if (mics.empty())
        throw DomainError("path synthesis: at least one error microphone required");
    for (const auto& m : mics)
        if (m.y < layout.baffle_y() - 1e-9)
            throw DomainError("path synthesis: error microphone behind the baffle plane");
}

} // namespace

PathSet build_free_field_paths(const SourceLayout& layout, std::span<const Vec3> mics,
                               std::size_t taps, int sample_rate, const Medium& medium) {
    check_mics(layout, mics);
    PathSet ps;
    ps.sample_rate = sample_rate;
    ps.taps = taps;
    ps.n_secondaries = layout.secondaries.size();
    ps.n_errors = mics.size();
    ps.primary.resize(ps.n_errors);
    ps.secondary.resize(ps.n_secondaries * ps.n_errors);

    // Baffle doubling: sources sit on the rigid plane.
    for (std::size_t m = 0; m < ps.n_errors; ++m) {
        ps.primary[m] = free_field_fir(distance(layout.opening_center, mics[m]), 2.0,
                                       taps, sample_rate, medium);
        for (std::size_t k = 0; k < ps.n_secondaries; ++k)
            ps.secondary_ir(k, m) =
                free_field_fir(distance(layout.secondaries[k].position, mics[m]), 2.0,
                               taps, sample_rate, medium);
    }
    ps.validate();
    return ps;
}

PathSet build_synthesized_paths(const SourceLayout& layout, std::span<const Vec3> mics,
                                std::size_t taps, int sample_rate, const Medium& medium,
                                const CavitySpec& cavity) {
    check_mics(layout, mics);
    cavity.validate();

    // Frequency grid dense enough that truncation to `taps` dominates the
    // error, not the sampling.
    std::size_t full = 16 * taps;
    std::size_t pow2 = 1;
    while (pow2 < full)
        pow2 <<= 1;
    full = pow2;
    const std::size_t bins = full / 2 + 1;

    const Vec3 opening_interior{layout.opening_center.x, cavity.ly,
                                layout.opening_center.z};
    const double opening_area = layout.opening_lx * layout.opening_lz;

    // Modal coloration of the primary: interior duct field at the opening
    // centroid converted to an equivalent volume-velocity ratio via the
    // plane-wave impedance rho0 c0.
    std::vector<cdouble> modal_gain(bins, 0.0);
    for (std::size_t i = 1; i < bins; ++i) {
        const double f = static_cast<double>(i) * sample_rate / static_cast<double>(full);
        const ModalField field =
            duct_source_field(cavity, layout.primary.position, cdouble(1.0, 0.0), f,
                              medium);
        const cdouble p_open = cavity_pressure(field, opening_interior, cavity);
        modal_gain[i] = p_open * opening_area / (medium.rho0 * medium.c0);
    }

    // Propagation-only Green's function (common j rho0 omega factor dropped
    // from both path families; it cancels in every controller-facing ratio).
    auto propagation = [&](const Vec3& src, const Vec3& dst, double f) {
        const double r = distance(src, dst);
        const double k = 2.0 * kPi * f / medium.c0;
        const cdouble j(0.0, 1.0);
        return 2.0 * std::exp(-j * (k * r)) / (4.0 * kPi * r);
    };

    PathSet ps;
    ps.sample_rate = sample_rate;
    ps.taps = taps;
    ps.n_secondaries = layout.secondaries.size();
    ps.n_errors = mics.size();
    ps.primary.resize(ps.n_errors);
    ps.secondary.resize(ps.n_secondaries * ps.n_errors);

    std::vector<cdouble> response(bins);
    for (std::size_t m = 0; m < ps.n_errors; ++m) {
        for (std::size_t i = 0; i < bins; ++i) {
            const double f =
                static_cast<double>(i) * sample_rate / static_cast<double>(full);
            response[i] = (i == 0)
                              ? cdouble(0.0)
                              : modal_gain[i] *
                                    propagation(layout.opening_center, mics[m], f);
        }
        ps.primary[m] = fir_from_frequency_response(response, taps, sample_rate);

        for (std::size_t k = 0; k < ps.n_secondaries; ++k) {
            const Vec3& src = layout.secondaries[k].position;
            for (std::size_t i = 0; i < bins; ++i) {
                const double f =
                    static_cast<double>(i) * sample_rate / static_cast<double>(full);
                response[i] = (i == 0)
                                  ? cdouble(2.0 / (4.0 * kPi * distance(src, mics[m])))
                                  : propagation(src, mics[m], f);
            }
            ps.secondary_ir(k, m) = fir_from_frequency_response(response, taps, sample_rate);
        }
    }
    ps.validate();
    return ps;
}

} // namespace ancsim::acoustics
