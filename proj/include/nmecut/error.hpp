#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nmecut {

enum class ErrorKind {
    DimensionMismatch,
    NonFinite,
    NotHermitian,
    NotUnitTrace,
    NotPositive,
    NotNormalized,
    NotUnitary,
    NotTracePreserving,
    InvalidParameter,
    OutOfRange,
    InvalidObservable,
    InvalidProbability,
    ZeroShots,
    Io,
    Parse,
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; kind() identifies
// the violated contract and what() carries the measured residual or context.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace nmecut
