#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gheat {

enum class ErrorCode {
    InvalidParameter,
    NonConvergent,
    ConsistencyFailure,
    BracketFailure,
    ScanExhausted,
    RangeError,
    UnstableDetected,
    InvalidGrid,
    DegenerateInterval,
    FitDegenerate,
    QuadratureFailure,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NonConvergent: return "NonConvergent";
    case ErrorCode::ConsistencyFailure: return "ConsistencyFailure";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::ScanExhausted: return "ScanExhausted";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::UnstableDetected: return "UnstableDetected";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::DegenerateInterval: return "DegenerateInterval";
    case ErrorCode::FitDegenerate: return "FitDegenerate";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    }
    return "Unknown";
}

/// Short %g rendering for diagnostics.
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them onto exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace gheat
