#include "ancsim/geometry.hpp"

#include "ancsim/dsp.hpp"

namespace ancsim {

EvalGrid hemisphere_grid(const Vec3& center, double radius, int count) {
    if (radius <= 0.0)
        throw DomainError("hemisphere_grid: radius must be positive");
    if (count < 1)
        throw DomainError("hemisphere_grid: count must be >= 1");

    // Golden-angle spiral over the forward (+y) hemisphere. cos(theta) is
    // sampled uniformly in (0, 1] so points avoid the equator plane itself.
    const double golden = dsp::kPi * (3.0 - std::sqrt(5.0));
    EvalGrid grid;
    grid.points.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double cos_t = (static_cast<double>(i) + 0.5) / count;  // toward +y
        const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
        const double phi = golden * i;
        grid.points.push_back(center + Vec3{radius * sin_t * std::cos(phi),
                                            radius * cos_t,
                                            radius * sin_t * std::sin(phi)});
    }
    return grid;
}

} // namespace ancsim
