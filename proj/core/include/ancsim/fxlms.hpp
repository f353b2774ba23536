#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ancsim/errors.hpp"

namespace ancsim::control {

struct FxlmsConfig {
    std::size_t taps = 128;        // control filter length L
    double step_size = 1e-3;       // mu
    std::size_t n_secondaries = 1; // K
    std::size_t n_errors = 1;      // M
    double leakage = 0.0;          // in [0, 1], 0 = none
    std::optional<double> output_limit;  // hard clamp on y, pascals

    void validate() const {
        if (taps == 0)
            throw DomainError("FxlmsConfig: taps must be >= 1");
        // step_size 0 freezes adaptation (useful for fixed-filter runs);
        // scenarios require a positive value at the schema level.
        if (step_size < 0.0)
            throw DomainError("FxlmsConfig: step_size must be >= 0");
        if (n_secondaries == 0 || n_errors == 0)
            throw DomainError("FxlmsConfig: channel counts must be >= 1");
        if (leakage < 0.0 || leakage > 1.0)
            throw DomainError("FxlmsConfig: leakage must be in [0, 1]");
        if (output_limit && *output_limit <= 0.0)
            throw DomainError("FxlmsConfig: output_limit must be positive");
    }
};

/// Centralized multichannel filtered-x LMS. Weight update per error e_m(n):
///   W_k[l] <- (1 - mu*leakage) W_k[l] + mu * sum_m x'_{k,m}(n-l) e_m(n)
/// with x'_{k,m} = s_hat_{k,m} * x. The plant is expected to form
/// e = d - s * y, so the correlation term enters with a plus sign.
class FxlmsController {
public:
    /// s_hat: secondary path estimates, n_secondaries * n_errors FIRs
    /// (index k * n_errors + m), all the same length.
    FxlmsController(const FxlmsConfig& config,
                    std::vector<std::vector<double>> s_hat);

    /// Pushes the reference sample, computes the K outputs for this sample
    /// and refreshes the filtered-reference histories.
    std::span<const double> advance(double x_n);

    /// LMS update with the M error samples aligned to the last advance().
    void adapt(std::span<const double> errors);

    /// advance() followed by adapt(); returns the outputs.
    std::span<const double> step(double x_n, std::span<const double> errors);

    const FxlmsConfig& config() const { return config_; }
    const std::vector<std::vector<double>>& weights() const { return w_; }
    std::vector<std::vector<double>>& weights() { return w_; }
    std::size_t samples_processed() const { return samples_; }

    /// Cumulative mean power of the filtered reference, averaged over all
    /// (k, m) pairs; feeds the stability estimate.
    double filtered_reference_power() const;

private:
    struct Ring {
        std::vector<double> buf;
        std::size_t mask = 0;
        std::size_t head = 0;

        void init(std::size_t min_capacity);
        void push(double v) {
            head = (head + 1) & mask;
            buf[head] = v;
        }
        double at_lag(std::size_t lag) const { return buf[(head - lag) & mask]; }
    };

    FxlmsConfig config_;
    std::vector<std::vector<double>> s_hat_;  // K*M x Ls
    std::size_t s_taps_ = 0;
    std::vector<std::vector<double>> w_;      // K x L
    Ring x_;                                  // reference history
    std::vector<Ring> xf_;                    // K*M filtered references
    std::vector<double> y_;                   // last outputs, K
    std::size_t samples_ = 0;
    double xf_power_accum_ = 0.0;
};

/// LMS stability estimate mu_max = 2 / (L * P_x') for filtered-reference
/// power P_x'.
double stability_step_bound(std::size_t taps, double filtered_ref_power);

} // namespace ancsim::control
