#include "ancsim/modal.hpp"

#include <cmath>

#include "ancsim/dsp.hpp"

namespace ancsim::acoustics {

using dsp::kPi;
using cdouble = std::complex<double>;

double mode_shape(int n, int m, double x, double z, const CavitySpec& cavity) {
    cavity.validate();
    if (n < 0 || m < 0)
        throw DomainError("mode_shape: mode indices must be >= 0");
    if (x < 0.0 || x > cavity.lx || z < 0.0 || z > cavity.lz)
        throw DomainError("mode_shape: (x, z) outside the cavity cross-section");
    return std::cos(n * kPi * x / cavity.lx) * std::cos(m * kPi * z / cavity.lz);
}

cdouble axial_wavenumber(int n, int m, double k, const CavitySpec& cavity) {
    cavity.validate();
    if (n < 0 || m < 0)
        throw DomainError("axial_wavenumber: mode indices must be >= 0");
    if (k < 0.0)
        throw DomainError("axial_wavenumber: k must be >= 0");
    const double kx = n * kPi / cavity.lx;
    const double kz = m * kPi / cavity.lz;
    const double arg = k * k - kx * kx - kz * kz;
    // Principal square root: real positive above cutoff, +j|.| below.
    return std::sqrt(cdouble(arg, 0.0));
}

cdouble cavity_pressure(const ModalField& field, const Vec3& position,
                        const CavitySpec& cavity) {
    cavity.validate();
    if (field.n_max > cavity.n_max || field.m_max > cavity.m_max)
        throw DomainError("cavity_pressure: field truncation exceeds cavity spec");
    if (position.x < 0.0 || position.x > cavity.lx || position.y < 0.0 ||
        position.y > cavity.ly || position.z < 0.0 || position.z > cavity.lz)
        throw DomainError("cavity_pressure: position outside the cavity");

    const cdouble j(0.0, 1.0);
    cdouble sum(0.0, 0.0);
    for (int n = 0; n <= field.n_max; ++n) {
        for (int m = 0; m <= field.m_max; ++m) {
            const cdouble fwd = field.forward[field.index(n, m)];
            const cdouble bwd = field.backward[field.index(n, m)];
            if (fwd == cdouble(0.0) && bwd == cdouble(0.0))
                continue;
            const cdouble ky = axial_wavenumber(n, m, field.k, cavity);
            const double phi = mode_shape(n, m, position.x, position.z, cavity);
            sum += (fwd * std::exp(-j * ky * position.y) +
                    bwd * std::exp(j * ky * position.y)) *
                   phi;
        }
    }
    return sum;
}

ModalField duct_source_field(const CavitySpec& cavity, const Vec3& source_pos,
                             cdouble strength, double freq, const Medium& medium) {
    cavity.validate();
    medium.validate();
    if (freq <= 0.0)
        throw DomainError("duct_source_field: frequency must be positive");
    if (source_pos.x < 0.0 || source_pos.x > cavity.lx || source_pos.y < 0.0 ||
        source_pos.y > cavity.ly || source_pos.z < 0.0 || source_pos.z > cavity.lz)
        throw DomainError("duct_source_field: source outside the cavity");

    const double omega = 2.0 * kPi * freq;
    const double k = omega / medium.c0;
    ModalField field(cavity.n_max, cavity.m_max, k);

    for (int n = 0; n <= cavity.n_max; ++n) {
        for (int m = 0; m <= cavity.m_max; ++m) {
            // Cross-section norm of the eigenfunction.
            const double eps_n = (n == 0) ? 1.0 : 0.5;
            const double eps_m = (m == 0) ? 1.0 : 0.5;
            const double lambda = cavity.lx * cavity.lz * eps_n * eps_m;

            const cdouble ky = axial_wavenumber(n, m, k, cavity);
            if (std::abs(ky) < 1e-12)
                continue;  // mode exactly at cutoff, skip the singularity

            const double phi_s =
                mode_shape(n, m, source_pos.x, source_pos.z, cavity);
            // Rigid back wall at y = 0 folds the image source into a
            // cos(k_y y_s) standing-wave factor on the outgoing wave. For
            // evanescent modes the decaying-toward-the-opening solution is
            // e^{-|k_y| y}, which is the e^{+j k_y y} basis term under the
            // positive-imaginary branch, with physical wavenumber -j|k_y|.
            if (ky.imag() == 0.0) {
                field.fwd(n, m) = medium.rho0 * omega * strength * phi_s *
                                  std::cos(ky * source_pos.y) / (lambda * ky);
            } else {
                const cdouble ky_phys = std::conj(ky);
                field.bwd(n, m) = medium.rho0 * omega * strength * phi_s *
                                  std::cos(ky_phys * source_pos.y) /
                                  (lambda * ky_phys);
            }
        }
    }
    return field;
}

} // namespace ancsim::acoustics
