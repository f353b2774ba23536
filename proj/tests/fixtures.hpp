#pragma once

// Shared reference geometry: the 0.64 x 0.50 x 0.92 m enclosure with a
// 0.20 x 0.48 m opening, four rim secondaries, four near-field mics.

#include <vector>

#include "ancsim/geometry.hpp"

namespace ancsim::fixtures {

inline CavitySpec reference_cavity() { return {0.64, 0.50, 0.92, 10, 10}; }

inline SourceLayout reference_layout() {
    SourceLayout layout;
    layout.opening_center = {0.32, 0.50, 0.46};
    layout.opening_lx = 0.20;
    layout.opening_lz = 0.48;
    layout.primary.position = {0.32, 0.25, 0.46};
    layout.primary.strength = {1.0, 0.0};
    layout.secondaries = {
        {{0.22, 0.50, 0.46}, {1.0, 0.0}},
        {{0.42, 0.50, 0.46}, {1.0, 0.0}},
        {{0.32, 0.50, 0.22}, {1.0, 0.0}},
        {{0.32, 0.50, 0.70}, {1.0, 0.0}},
    };
    return layout;
}

/// One error microphone 0.15 m in front of each secondary speaker; the
/// near-diagonal pairing keeps the 4x4 secondary matrix well conditioned.
inline std::vector<Vec3> reference_mics() {
    return {{0.17, 0.65, 0.46},
            {0.47, 0.65, 0.46},
            {0.32, 0.65, 0.17},
            {0.32, 0.65, 0.75}};
}

} // namespace ancsim::fixtures
