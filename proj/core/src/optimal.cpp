#include "ancsim/optimal.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "ancsim/dsp.hpp"

namespace ancsim::acoustics {

using cdouble = std::complex<double>;

OptimalControl optimal_source_strengths(std::span<const cdouble> primary,
                                        const ComplexMatrix& secondary, cdouble q_p) {
    if (secondary.rows != primary.size())
        throw DomainError("optimal_source_strengths: row count mismatch");
    if (secondary.cols == 0)
        throw DomainError("optimal_source_strengths: no secondary sources");
    if (secondary.rows < secondary.cols)
        throw IllPosedControlError(
            "optimal_source_strengths: fewer grid points than secondaries",
            std::numeric_limits<double>::infinity());

    const auto rows = static_cast<Eigen::Index>(secondary.rows);
    const auto cols = static_cast<Eigen::Index>(secondary.cols);
    Eigen::Map<const Eigen::Matrix<cdouble, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        S(secondary.data.data(), rows, cols);
    Eigen::Map<const Eigen::VectorXcd> P(primary.data(), rows);

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(S, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    const double cond = (smin > 0.0) ? smax / smin
                                     : std::numeric_limits<double>::infinity();
    if (!(smin > smax * 1e-13))
        throw IllPosedControlError("optimal_source_strengths: rank-deficient secondary matrix",
                                   cond);

    const Eigen::VectorXcd q = -(svd.solve(P * q_p));

    OptimalControl out;
    out.strengths.assign(q.data(), q.data() + q.size());
    out.condition_number = cond;
    return out;
}

double control_cost(std::span<const cdouble> primary, const ComplexMatrix& secondary,
                    cdouble q_p, std::span<const cdouble> q_s, const Medium& medium) {
    medium.validate();
    if (secondary.rows != primary.size() || secondary.cols != q_s.size())
        throw DomainError("control_cost: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < primary.size(); ++i) {
        cdouble pt = primary[i] * q_p;
        for (std::size_t k = 0; k < q_s.size(); ++k)
            pt += secondary(i, k) * q_s[k];
        acc += std::norm(pt);
    }
    return acc / (2.0 * medium.rho0 * medium.c0 * medium.c0);
}

double noise_reduction_db(std::span<const cdouble> p_without,
                          std::span<const cdouble> p_with) {
    if (p_without.size() != p_with.size())
        throw DomainError("noise_reduction_db: length mismatch");
    if (p_without.empty())
        throw DomainError("noise_reduction_db: empty pressure lists");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < p_without.size(); ++i) {
        num += std::norm(p_without[i]);
        den += std::norm(p_with[i]);
    }
    if (den == 0.0)
        return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(num / den);
}

double max_controllable_frequency(double shorter_side_m, const Medium& medium) {
    medium.validate();
    if (shorter_side_m <= 0.0)
        throw DomainError("max_controllable_frequency: side must be positive");
    return medium.c0 / (2.0 * shorter_side_m);
}

} // namespace ancsim::acoustics
