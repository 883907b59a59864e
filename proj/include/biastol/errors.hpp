#pragma once

#include <stdexcept>
#include <string>

namespace biastol {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The requested design cannot be met at the given inputs (e.g. a negative
/// Scheffe-Tukey ratio, or a sample size smaller than r + m).
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative procedure ran out of iterations.
class NonConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A sample-size search hit its hard cap without reaching the target.
class NoSolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input files or serialized objects.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace biastol
