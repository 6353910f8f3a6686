// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace raqmimo {

// Generator failed the trace-preservation check after reduction.
class ModelInconsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Reduced steady-state system is singular or too ill-conditioned to solve.
class DegenerateOperatingPointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericalDegeneracyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OptimizerFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace raqmimo
