#pragma once

#include <stdexcept>

namespace vallab {

// Base type for all library failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented precondition was violated by the caller.
struct InvalidInput : Error {
    using Error::Error;
};

// Subset search: the eligible mass cannot reach the requested norm target.
struct TargetUnreachable : Error {
    using Error::Error;
};

// Subset search: a single atom's contribution exceeds the slack budget.
struct GridTooCoarse : Error {
    using Error::Error;
};

// A table kernel (or theta table) was evaluated outside its lambda grid.
struct KernelRangeError : Error {
    using Error::Error;
};

// An iterative solver failed to converge; indicates an internal bug.
struct ConvergenceError : Error {
    using Error::Error;
};

} // namespace vallab
