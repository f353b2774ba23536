#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "ancsim/errors.hpp"

namespace ancsim {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

struct Medium {
    double c0 = 343.0;    // speed of sound, m/s
    double rho0 = 1.21;   // air density, kg/m^3

    void validate() const {
        if (c0 <= 0.0 || rho0 <= 0.0)
            throw DomainError("Medium: c0 and rho0 must be positive");
    }
};

/// Rigid open cavity, interior x in [0, lx], y in [0, ly], z in [0, lz].
/// The opening sits on the y = ly face; modal propagation runs along y.
struct CavitySpec {
    double lx = 0.64, ly = 0.50, lz = 0.92;
    int n_max = 10, m_max = 10;

    void validate() const {
        if (lx <= 0.0 || ly <= 0.0 || lz <= 0.0)
            throw DomainError("CavitySpec: dimensions must be positive");
        if (n_max < 0 || m_max < 0)
            throw DomainError("CavitySpec: truncation orders must be >= 0");
    }
};

struct PointSource {
    Vec3 position;
    std::complex<double> strength{1.0, 0.0};  // volume velocity, m^3/s
};

/// Primary source plus boundary secondaries around a rectangular opening.
/// The opening lies in the plane y = opening_center.y; the exterior is the
/// half-space y > opening_center.y.
struct SourceLayout {
    PointSource primary;
    std::vector<PointSource> secondaries;
    Vec3 opening_center;
    double opening_lx = 0.20;  // shorter side l_s in the reference setup
    double opening_lz = 0.48;

    double baffle_y() const { return opening_center.y; }
    double shorter_side() const { return std::min(opening_lx, opening_lz); }

    void validate() const {
        if (secondaries.empty())
            throw DomainError("SourceLayout: at least one secondary source required");
        if (opening_lx <= 0.0 || opening_lz <= 0.0)
            throw DomainError("SourceLayout: opening sides must be positive");
        for (const auto& s : secondaries)
            if (std::abs(s.position.y - baffle_y()) > 1e-9)
                throw DomainError(
                    "SourceLayout: boundary secondaries must lie on the opening plane");
    }
};

struct EvalGrid {
    std::vector<Vec3> points;

    void validate() const {
        if (points.empty())
            throw DomainError("EvalGrid: at least one evaluation point required");
    }
};

/// Deterministic Fibonacci-spiral hemisphere facing +y, centered on
/// `center`, at the given radius.
EvalGrid hemisphere_grid(const Vec3& center, double radius, int count);

} // namespace ancsim
