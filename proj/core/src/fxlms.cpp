#include "ancsim/fxlms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ancsim::control {

void FxlmsController::Ring::init(std::size_t min_capacity) {
    std::size_t cap = 1;
    while (cap < min_capacity)
        cap <<= 1;
    buf.assign(cap, 0.0);
    mask = cap - 1;
    head = 0;
}

FxlmsController::FxlmsController(const FxlmsConfig& config,
                                 std::vector<std::vector<double>> s_hat)
    : config_(config), s_hat_(std::move(s_hat)) {
    config_.validate();
    const std::size_t pairs = config_.n_secondaries * config_.n_errors;
    if (s_hat_.size() != pairs)
        throw DomainError("FxlmsController: s_hat must have K*M impulse responses");
    s_taps_ = s_hat_.front().size();
    if (s_taps_ == 0)
        throw DomainError("FxlmsController: s_hat responses must be non-empty");
    for (const auto& h : s_hat_) {
        if (h.size() != s_taps_)
            throw DomainError("FxlmsController: s_hat responses must share one length");
        for (double v : h)
            if (!std::isfinite(v))
                throw DomainError("FxlmsController: non-finite s_hat coefficient");
    }

    w_.assign(config_.n_secondaries, std::vector<double>(config_.taps, 0.0));
    x_.init(config_.taps + s_taps_);
    xf_.resize(pairs);
    for (auto& r : xf_)
        r.init(config_.taps);
    y_.assign(config_.n_secondaries, 0.0);
}

std::span<const double> FxlmsController::advance(double x_n) {
    if (!std::isfinite(x_n))
        throw DivergenceError("FxlmsController: non-finite reference sample", samples_);
    x_.push(x_n);

    const std::size_t K = config_.n_secondaries;
    const std::size_t M = config_.n_errors;
    const std::size_t L = config_.taps;

    for (std::size_t k = 0; k < K; ++k) {
        const auto& wk = w_[k];
        double acc = 0.0;
        for (std::size_t l = 0; l < L; ++l)
            acc += wk[l] * x_.at_lag(l);
        if (config_.output_limit)
            acc = std::clamp(acc, -*config_.output_limit, *config_.output_limit);
        y_[k] = acc;
    }

    double pw = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        for (std::size_t m = 0; m < M; ++m) {
            const auto& h = s_hat_[k * M + m];
            double acc = 0.0;
            for (std::size_t l = 0; l < s_taps_; ++l)
                acc += h[l] * x_.at_lag(l);
            xf_[k * M + m].push(acc);
            pw += acc * acc;
        }
    }
    xf_power_accum_ += pw / static_cast<double>(K * M);

    ++samples_;
    return y_;
}

void FxlmsController::adapt(std::span<const double> errors) {
    const std::size_t K = config_.n_secondaries;
    const std::size_t M = config_.n_errors;
    const std::size_t L = config_.taps;
    if (errors.size() != M)
        throw DomainError("FxlmsController::adapt: expected one error per microphone");
    for (double e : errors)
        if (!std::isfinite(e))
            throw DivergenceError("FxlmsController: non-finite error sample",
                                  samples_ == 0 ? 0 : samples_ - 1);

    const double mu = config_.step_size;
    const double keep = 1.0 - mu * config_.leakage;
    bool finite = true;
    for (std::size_t k = 0; k < K; ++k) {
        auto& wk = w_[k];
        for (std::size_t l = 0; l < L; ++l) {
            double corr = 0.0;
            for (std::size_t m = 0; m < M; ++m)
                corr += xf_[k * M + m].at_lag(l) * errors[m];
            const double updated = keep * wk[l] + mu * corr;
            wk[l] = updated;
            finite &= std::isfinite(updated);
        }
    }
    if (!finite)
        throw DivergenceError("FxlmsController: weight update diverged",
                              samples_ == 0 ? 0 : samples_ - 1);
}

std::span<const double> FxlmsController::step(double x_n, std::span<const double> errors) {
    advance(x_n);
    adapt(errors);
    return y_;
}

double FxlmsController::filtered_reference_power() const {
    return samples_ == 0 ? 0.0 : xf_power_accum_ / static_cast<double>(samples_);
}

double stability_step_bound(std::size_t taps, double filtered_ref_power) {
    if (taps == 0 || filtered_ref_power <= 0.0)
        return std::numeric_limits<double>::infinity();
    return 2.0 / (static_cast<double>(taps) * filtered_ref_power);
}

} // namespace ancsim::control
