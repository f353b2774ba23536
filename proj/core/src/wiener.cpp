#include "ancsim/wiener.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "ancsim/dsp.hpp"
#include "ancsim/errors.hpp"

namespace ancsim::control {

WienerSolution wiener_solution(const SampleBuffer& x, const SampleBuffer& d,
                               const std::vector<std::vector<double>>& s,
                               std::size_t n_secondaries, std::size_t taps) {
    x.validate();
    d.validate();
    if (x.channel_count() != 1)
        throw DomainError("wiener_solution: reference must be single-channel");
    if (x.frames() != d.frames())
        throw DomainError("wiener_solution: reference/desired length mismatch");
    const std::size_t K = n_secondaries;
    const std::size_t M = d.channel_count();
    const std::size_t L = taps;
    if (K == 0 || L == 0)
        throw DomainError("wiener_solution: need K >= 1 and taps >= 1");
    if (s.size() != K * M)
        throw DomainError("wiener_solution: s must hold K*M impulse responses");

    const std::size_t n = x.frames();
    const std::size_t dim = K * L;
    if (n < 4 * dim)
        throw DomainError("wiener_solution: signal too short for the filter order");

    // Filtered references u_{k,m} = s_{k,m} * x.
    std::vector<std::vector<double>> u(K * M);
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t m = 0; m < M; ++m)
            u[k * M + m] = dsp::fir_filter(x.channels[0], s[k * M + m]);

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    Eigen::VectorXd r(static_cast<Eigen::Index>(dim));

    for (std::size_t m = 0; m < M; ++m) {
        const auto& dm = d.channels[m];
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < K; ++k) {
                const auto& ukm = u[k * M + m];
                for (std::size_t l = 0; l < L; ++l)
                    r(static_cast<Eigen::Index>(k * L + l)) =
                        (i >= l) ? ukm[i - l] : 0.0;
            }
            A.selfadjointView<Eigen::Lower>().rankUpdate(r, 1.0);
            b += dm[i] * r;
        }
    }
    A = A.selfadjointView<Eigen::Lower>();

    WienerSolution out;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    Eigen::VectorXd w;
    bool ok = ldlt.info() == Eigen::Success;
    if (ok) {
        w = ldlt.solve(b);
        ok = (A * w - b).norm() <= 1e-6 * (b.norm() + 1e-300);
    }
    if (!ok) {
        const double ridge = 1e-10 * A.trace();
        Eigen::MatrixXd Ar = A;
        Ar.diagonal().array() += ridge;
        w = Eigen::LDLT<Eigen::MatrixXd>(Ar).solve(b);
        out.regularized = true;
    }

    out.weights.assign(K, std::vector<double>(L, 0.0));
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t l = 0; l < L; ++l)
            out.weights[k][l] = w(static_cast<Eigen::Index>(k * L + l));

    // Residual by filtering with the solved weights.
    double acc = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        const auto& dm = d.channels[m];
        for (std::size_t i = 0; i < n; ++i) {
            double pred = 0.0;
            for (std::size_t k = 0; k < K; ++k) {
                const auto& ukm = u[k * M + m];
                const std::size_t lmax = std::min(L - 1, i);
                for (std::size_t l = 0; l <= lmax; ++l)
                    pred += out.weights[k][l] * ukm[i - l];
            }
            const double e = dm[i] - pred;
            acc += e * e;
        }
    }
    out.residual_power = acc / static_cast<double>(n * M);
    return out;
}

} // namespace ancsim::control
