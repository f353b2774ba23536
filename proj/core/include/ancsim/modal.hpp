#pragma once

#include <complex>
#include <vector>

#include "ancsim/geometry.hpp"

namespace ancsim::acoustics {

/// Rigid-wall eigenfunction cos(n pi x / lx) cos(m pi z / lz).
/// Coordinates must lie inside the cavity cross-section.
double mode_shape(int n, int m, double x, double z, const CavitySpec& cavity);

/// Axial wavenumber k_y = sqrt(k^2 - (n pi/lx)^2 - (m pi/lz)^2).
/// Real positive above the modal cutoff, positive imaginary below it.
std::complex<double> axial_wavenumber(int n, int m, double k, const CavitySpec& cavity);

/// Per-mode forward/backward amplitudes of the in-cavity field at a fixed
/// wavenumber k. Index layout: n * (m_max + 1) + m.
struct ModalField {
    int n_max = 0, m_max = 0;
    double k = 0.0;
    std::vector<std::complex<double>> forward;   // coefficient of e^{-j k_y y}
    std::vector<std::complex<double>> backward;  // coefficient of e^{+j k_y y}

    ModalField() = default;
    ModalField(int n_max_, int m_max_, double k_)
        : n_max(n_max_), m_max(m_max_), k(k_),
          forward(static_cast<std::size_t>(n_max_ + 1) * (m_max_ + 1)),
          backward(forward.size()) {}

    std::size_t index(int n, int m) const {
        return static_cast<std::size_t>(n) * (m_max + 1) + static_cast<std::size_t>(m);
    }
    std::complex<double>& fwd(int n, int m) { return forward[index(n, m)]; }
    std::complex<double>& bwd(int n, int m) { return backward[index(n, m)]; }
};

/// Modal sum p(x,y,z) = sum_nm [p+ e^{-j k_y y} + p- e^{+j k_y y}] phi_nm(x,z),
/// truncated at the cavity's (n_max, m_max). Position must lie inside the
/// cavity.
std::complex<double> cavity_pressure(const ModalField& field, const Vec3& position,
                                     const CavitySpec& cavity);

/// Modal amplitudes excited by a point source inside the cavity, with a
/// rigid wall at y = 0 and an anechoic opening at y = ly (semi-infinite
/// duct model). Valid for evaluation at y >= source y.
ModalField duct_source_field(const CavitySpec& cavity, const Vec3& source_pos,
                             std::complex<double> strength, double freq,
                             const Medium& medium);

} // namespace ancsim::acoustics
