#pragma once

#include <string>
#include <vector>

#include "ancsim/levels.hpp"
#include "ancsim/sample_buffer.hpp"

namespace ancsim::analysis {

struct NrRow {
    std::string label;
    double spl_off_db = 0.0;
    double spl_on_db = 0.0;
    double nr_db = 0.0;        // spl_off - spl_on
    bool provisional = false;  // controller had not converged
};

struct NrReport {
    Weighting weighting = Weighting::Flat;
    std::vector<NrRow> rows;
};

/// One Table-1-style row from matching off/on recordings. `converged=false`
/// marks the row provisional.
NrRow broadband_nr(const SampleBuffer& e_off, const SampleBuffer& e_on,
                   Weighting weighting, const std::string& label,
                   bool converged = true);

} // namespace ancsim::analysis
