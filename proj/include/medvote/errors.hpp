#pragma once

#include <stdexcept>
#include <string>

namespace medvote {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Ground set or quantification domain exceeds the supported desk-scale caps.
struct GroundTooLarge : Error {
    using Error::Error;
};

// Malformed textual input (preorder encodings, profile files, rule specs).
struct ParseError : Error {
    using Error::Error;
};

// An operation received an empty agenda where a nonempty one is required.
struct EmptyAgenda : Error {
    using Error::Error;
};

// Structurally invalid argument (bad agent index, quota out of range, ...).
struct ParameterError : Error {
    using Error::Error;
};

// A filter family reached a profile on which the defining meet does not
// exist. Surfaced, never repaired.
struct IllFormedFamily : Error {
    using Error::Error;
};

// A sequential agenda scheme was requested for a rule whose restriction
// family is not well-defined (the rule is not independent of irrelevant
// alternatives) and no explicit per-agenda scheme was supplied.
struct FamilyUndefined : Error {
    using Error::Error;
};

// Invariant breach inside the library: always a bug, never an input error.
struct InternalError : Error {
    using Error::Error;
};

} // namespace medvote
