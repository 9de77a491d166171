#pragma once

#include <stdexcept>
#include <string>

namespace slowent {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A rational proxy is too shallow to certify the requested answer.
/// Callers recover by deepening the continued-fraction proxy.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Too few data points or samples for the requested estimate.
class InsufficientDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation would exceed a hard resource limit (event count, 64-bit lattice).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid constructor arguments (lengths, permutations, spec strings).
class ConstructionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace slowent
