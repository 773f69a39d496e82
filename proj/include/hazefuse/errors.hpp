#ifndef HAZEFUSE_ERRORS_HPP
#define HAZEFUSE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hazefuse {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input file could not be read or is not syntactically valid.
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid input that violates an invariant; message names the
// first violated invariant.
struct ValidationError : Error {
    using Error::Error;
};

// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

// Time query outside the scenario horizon.
struct OutOfRangeError : Error {
    using Error::Error;
};

// Stepping past the scenario duration.
struct EndOfScenarioError : Error {
    using Error::Error;
};

// Feature extraction found no sample for a channel inside the window.
struct EmptyWindowError : Error {
    using Error::Error;
};

// Assessment references a template the dictionary does not hold.
struct UnknownTemplateError : Error {
    using Error::Error;
};

struct UnknownSensorError : Error {
    using Error::Error;
};

struct NonMonotonicTimestampError : Error {
    using Error::Error;
};

struct EmptyDictionaryError : Error {
    using Error::Error;
};

// Metrics asked to score a log against a scenario that did not produce it.
struct MismatchedScenarioError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace hazefuse

#endif  // HAZEFUSE_ERRORS_HPP
