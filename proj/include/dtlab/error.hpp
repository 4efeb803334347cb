#pragma once

#include <stdexcept>
#include <string>

namespace dtlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside the domain of the operation (cuts, supports, ranges).
struct DomainError : Error {
    using Error::Error;
};

// An iterative solver hit its iteration cap before reaching tolerance.
struct ConvergenceError : Error {
    using Error::Error;
};

// Exact-arithmetic request beyond the configured degree cap.
struct CapExceeded : Error {
    using Error::Error;
};

// Node set too close to a collision for partial-fraction weights.
struct DegenerateNodes : Error {
    using Error::Error;
};

struct LinearAlgebraError : Error {
    using Error::Error;
};

} // namespace dtlab
