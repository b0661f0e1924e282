#pragma once

#include <stdexcept>
#include <string>

namespace mwls {

/// Invalid input: bad parameters, malformed configuration, violated
/// preconditions. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown during a run (non-finite values, singular
/// diffusion). Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mwls
