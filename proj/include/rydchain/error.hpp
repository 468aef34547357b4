// error.hpp
// Error categories shared by every rydchain module.

#pragma once

#include <stdexcept>
#include <string>

namespace rydchain {

enum class ErrorKind {
    Capacity,    // state dimension above the configured cap
    Shape,       // dimension / scheme mismatch between operands
    Index,       // site index out of range
    Validation,  // malformed input value (non-normalized ket, non-Hermitian matrix, ...)
    Scheme,      // transition not available in the level scheme
    Parameter,   // physically meaningless parameter (zero Rabi frequency, ...)
    Geometry,    // coincident atoms
    Numerical,   // iteration did not converge / cross-check failed
    Parse,       // malformed text input
    Usage        // bad command-line combination
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Index: return "index";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Scheme: return "scheme";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Usage: return "usage";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Process exit codes used by the command-line front end.
inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Capacity: return 4;
    case ErrorKind::Numerical: return 3;
    default: return 2;
    }
}

} // namespace rydchain
