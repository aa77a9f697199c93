#pragma once

#include <stdexcept>
#include <string>

namespace hypermatch {

/// Vector/matrix/tensor sizes disagree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input contains NaN/inf, negative weights, or otherwise violates a type invariant.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A dense materialization or brute-force routine was asked for a size above its cap.
class ThresholdError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A solver broke one of its own guarantees (monotonicity, validity).
class SolverAnomaly : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hypermatch
