#pragma once

#include <stdexcept>
#include <string>

namespace dampflow {

/// A precondition on a physical or numerical parameter does not hold.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The solver could not continue without breaking one of its guarantees
/// (CFL bound, positivity, invariant region, support inside the domain).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dampflow
