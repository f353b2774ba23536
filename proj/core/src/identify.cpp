#include "ancsim/identify.hpp"

#include <cmath>
#include <string>

#include "ancsim/dsp.hpp"
#include "ancsim/errors.hpp"

namespace ancsim::control {

IdentificationResult identify_secondary_paths(const PlantFn& plant,
                                              std::size_t n_secondaries,
                                              std::size_t n_errors,
                                              const SampleBuffer& excitation,
                                              std::size_t taps, double mu, int passes) {
    excitation.validate();
    if (excitation.channel_count() != 1)
        throw DomainError("identify_secondary_paths: excitation must be single-channel");
    if (taps == 0)
        throw DomainError("identify_secondary_paths: taps must be >= 1");
    if (mu < 0.0)
        throw DomainError("identify_secondary_paths: mu must be >= 0");
    if (passes < 1)
        throw DomainError("identify_secondary_paths: passes must be >= 1");

    const auto& u = excitation.channels[0];
    const std::size_t n = u.size();

    IdentificationResult result;
    result.s_hat.assign(n_secondaries * n_errors, std::vector<double>(taps, 0.0));

    double err_acc = 0.0, out_acc = 0.0;
    for (std::size_t k = 0; k < n_secondaries; ++k) {
        const auto response = plant(k, u);
        if (response.size() != n_errors)
            throw DomainError("identify_secondary_paths: plant returned wrong mic count");
        for (const auto& ch : response)
            if (ch.size() != n)
                throw DomainError("identify_secondary_paths: plant length mismatch");

        for (int pass = 0; pass < passes; ++pass) {
            const bool last = pass == passes - 1;
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t m = 0; m < n_errors; ++m) {
                    auto& h = result.s_hat[k * n_errors + m];
                    double est = 0.0;
                    const std::size_t lmax = std::min(taps - 1, i);
                    for (std::size_t l = 0; l <= lmax; ++l)
                        est += h[l] * u[i - l];
                    const double err = response[m][i] - est;
                    if (!std::isfinite(err))
                        throw DivergenceError(
                            "secondary-path identification diverged with mu_id=" +
                                std::to_string(mu),
                            i);
                    for (std::size_t l = 0; l <= lmax; ++l)
                        h[l] += mu * err * u[i - l];
                    if (last) {
                        err_acc += err * err;
                        out_acc += response[m][i] * response[m][i];
                    }
                }
            }
        }
    }
    result.error_power_ratio = out_acc > 0.0 ? err_acc / out_acc : 0.0;
    return result;
}

IdentificationResult identify_secondary_paths(const acoustics::PathSet& plant,
                                              const SampleBuffer& excitation,
                                              std::size_t taps, double mu, int passes) {
    plant.validate();
    PlantFn fn = [&plant](std::size_t k, std::span<const double> u) {
        std::vector<std::vector<double>> out(plant.n_errors);
        for (std::size_t m = 0; m < plant.n_errors; ++m)
            out[m] = dsp::fir_filter(u, plant.secondary_ir(k, m));
        return out;
    };
    return identify_secondary_paths(fn, plant.n_secondaries, plant.n_errors, excitation,
                                    taps, mu, passes);
}

} // namespace ancsim::control
