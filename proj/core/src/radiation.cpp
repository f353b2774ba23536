#include "ancsim/radiation.hpp"

#include <cmath>

#include "ancsim/dsp.hpp"

namespace ancsim::acoustics {

using dsp::kPi;
using cdouble = std::complex<double>;

cdouble monopole_transfer(const Vec3& source, const Vec3& receiver, double freq,
                          const Medium& medium) {
    medium.validate();
    if (freq <= 0.0)
        throw DomainError("monopole_transfer: frequency must be positive");
    const double r = distance(source, receiver);
    if (r < 1e-12)
        throw DomainError("monopole_transfer: source and receiver coincide");
    const double omega = 2.0 * kPi * freq;
    const double k = omega / medium.c0;
    const cdouble j(0.0, 1.0);
    return j * medium.rho0 * omega * std::exp(-j * (k * r)) / (4.0 * kPi * r);
}

cdouble baffled_transfer(const Vec3& source, const Vec3& receiver, double freq,
                         const Medium& medium, double baffle_y) {
    const Vec3 image{source.x, 2.0 * baffle_y - source.y, source.z};
    cdouble p = monopole_transfer(source, receiver, freq, medium);
    if (distance(image, source) < 1e-12)
        return 2.0 * p;  // source on the plane: image coincides
    return p + monopole_transfer(image, receiver, freq, medium);
}

namespace {

void check_grid(const SourceLayout& layout, const EvalGrid& grid) {
    layout.validate();
    grid.validate();
    const double plane = layout.baffle_y();
    for (const auto& p : grid.points)
        if (p.y < plane - 1e-9)
            throw DomainError("evaluation point behind the baffle plane");
}

} // namespace

std::vector<cdouble> exterior_pressure(const SourceLayout& layout, const EvalGrid& grid,
                                       double freq, const Medium& medium) {
    check_grid(layout, grid);
    const double plane = layout.baffle_y();
    std::vector<cdouble> out(grid.points.size());
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        const Vec3& p = grid.points[i];
        cdouble acc = layout.primary.strength *
                      baffled_transfer(layout.opening_center, p, freq, medium, plane);
        for (const auto& s : layout.secondaries)
            acc += s.strength * baffled_transfer(s.position, p, freq, medium, plane);
        out[i] = acc;
    }
    return out;
}

TransferMatrices transfer_matrices(const SourceLayout& layout, const EvalGrid& grid,
                                   double freq, const Medium& medium) {
    check_grid(layout, grid);
    const double plane = layout.baffle_y();
    const std::size_t nv = grid.points.size();
    const std::size_t k = layout.secondaries.size();

    TransferMatrices tm;
    tm.primary.resize(nv);
    tm.secondary = ComplexMatrix(nv, k);
    for (std::size_t i = 0; i < nv; ++i) {
        const Vec3& p = grid.points[i];
        tm.primary[i] = baffled_transfer(layout.opening_center, p, freq, medium, plane);
        for (std::size_t c = 0; c < k; ++c)
            tm.secondary(i, c) =
                baffled_transfer(layout.secondaries[c].position, p, freq, medium, plane);
    }
    return tm;
}

} // namespace ancsim::acoustics
