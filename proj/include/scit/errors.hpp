#pragma once

#include <stdexcept>
#include <string>

namespace scit {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Enumeration backend asked to solve a problem above its size limit.
struct EnumerationLimitExceeded : Error {
    using Error::Error;
};

// A dual multiplier on an inequality cut has the wrong sign.
struct SignViolation : Error {
    using Error::Error;
};

// The dense symmetric eigensolver did not converge.
struct EigenFailure : Error {
    using Error::Error;
};

// Incumbent point violates u + v = e or complementarity.
struct InfeasibleIncumbent : Error {
    using Error::Error;
};

// Two certified cuts (or cuts and fixes) exclude every feasible point.
// Signals that eta was below the true optimum or a certificate was wrong;
// runs must abort loudly when this is thrown.
struct Contradiction : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};
struct MalformedHeader : ParseError {
    using ParseError::ParseError;
};
struct IndexOutOfRange : ParseError {
    using ParseError::ParseError;
};
struct DuplicateEntry : ParseError {
    using ParseError::ParseError;
};

}  // namespace scit
