#include "ancsim/nr_report.hpp"

namespace ancsim::analysis {

NrRow broadband_nr(const SampleBuffer& e_off, const SampleBuffer& e_on,
                   Weighting weighting, const std::string& label, bool converged) {
    e_off.validate();
    e_on.validate();
    if (e_off.channel_count() != e_on.channel_count())
        throw DomainError("broadband_nr: channel count mismatch");

    NrRow row;
    row.label = label;
    row.spl_off_db = spl_db(e_off, weighting);
    row.spl_on_db = spl_db(e_on, weighting);
    row.nr_db = row.spl_off_db - row.spl_on_db;
    row.provisional = !converged;
    return row;
}

} // namespace ancsim::analysis
