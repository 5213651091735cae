#pragma once

#include <stdexcept>
#include <string>

namespace rotogp {

// Malformed parameters or inputs violating an operation's preconditions.
struct InvalidArgument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Two fields or operators live on different grids/bases.
struct GridMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Iterative method exhausted its budget.
struct NotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// NaN/Inf or a breakdown inside a numerical kernel.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

}  // namespace rotogp
