// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace risfocus {

// Bad user input: out-of-range parameters, unknown keys, malformed files.
// The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Coincident points, tangent arguments outside their domain, and similar.
// The CLI maps this to exit code 2.
class GeometryError : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Numerical failures that are not caused by malformed input, e.g. a beam
// whose -3 dB crossings cannot be found. Exit code 2.
class NumericError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace risfocus
