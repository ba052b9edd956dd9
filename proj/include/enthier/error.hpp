#pragma once

#include <stdexcept>
#include <string>

namespace enthier {

/// Base error for contract violations (bad shapes, invalid states, bad parameters).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A theorem-level precondition does not hold for the given input.
class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace enthier
