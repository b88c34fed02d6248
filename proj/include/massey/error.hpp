#pragma once

#include <stdexcept>
#include <string>

namespace massey {

enum class ErrorKind {
    InvalidInput,
    WindowTooSmall,
    CapExceeded,
    MixedDegree,
    NotADefiningSystem,
    SingularMatrix,
    DomainError,
    IndexError,
    OverlappingSupports,
    UnsupportedOperands,
    Inconsistency,  // a checked invariant failed
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::WindowTooSmall: return "WindowTooSmall";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::MixedDegree: return "MixedDegree";
        case ErrorKind::NotADefiningSystem: return "NotADefiningSystem";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::IndexError: return "IndexError";
        case ErrorKind::OverlappingSupports: return "OverlappingSupports";
        case ErrorKind::UnsupportedOperands: return "UnsupportedOperands";
        case ErrorKind::Inconsistency: return "Inconsistency";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace massey
