#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cranplan {

/// Base class of every error this library throws on purpose.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// CPU frequency below the 2.5 GHz floor needed to keep the baseband
/// stack synchronized.
class FrequencyBelowMinimum : public Error {
public:
    using Error::Error;
};

/// PRB or MCS value with no entry in the parameter tables.
class UnknownParameter : public Error {
public:
    using Error::Error;
};

class NegativeThroughput : public Error {
public:
    using Error::Error;
};

/// PRB not present in the link-quality table.
class UnknownPrb : public Error {
public:
    using Error::Error;
};

/// Input document does not match the expected schema.
class SchemaViolation : public Error {
public:
    using Error::Error;
};

/// alpha/beta tables must be non-decreasing in PRB/MCS.
class MonotonicityViolation : public Error {
public:
    using Error::Error;
};

/// The regression design matrix is rank deficient.
class Unidentifiable : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

/// All regressor values identical; a line cannot be fitted.
class DegenerateX : public Error {
public:
    using Error::Error;
};

/// CSV row failed to parse or violated a record invariant.
/// line() is the 1-based line number in the input (header is line 1).
class MalformedRow : public Error {
public:
    MalformedRow(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnknownHeader : public Error {
public:
    using Error::Error;
};

class InvalidScenario : public Error {
public:
    using Error::Error;
};

/// A single workload item exceeds the capacity of one VM.
class InfeasibleItem : public Error {
public:
    using Error::Error;
};

/// Deadline budget at or below the frequency-independent floor.
class InfeasibleBudget : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace cranplan
