#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ancsim {

/// Malformed scenario files, inconsistent channel counts, bad field values.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numeric preconditions: Nyquist violations, out-of-domain coordinates,
/// coincident source/receiver, too-short buffers.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// WAV parse failures; the message names the offending header field.
class WavFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Adaptive filter produced a non-finite coefficient or signal value.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, std::size_t sample_index)
        : std::runtime_error(what + " at sample " + std::to_string(sample_index)),
          sample_index_(sample_index) {}

    std::size_t sample_index() const { return sample_index_; }

private:
    std::size_t sample_index_;
};

/// Rank-deficient secondary transfer matrix; carries the condition number.
class IllPosedControlError : public std::runtime_error {
public:
    IllPosedControlError(const std::string& what, double condition_number)
        : std::runtime_error(what + " (condition number " +
                             std::to_string(condition_number) + ")"),
          condition_number_(condition_number) {}

    double condition_number() const { return condition_number_; }

private:
    double condition_number_;
};

/// Report/file output failures.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ancsim
