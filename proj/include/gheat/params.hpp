#pragma once

#include "gheat/error.hpp"

#include <string>

namespace gheat {

/// Self-similar decay exponent, restricted to the open interval (0, 1/2).
class LambdaParam {
public:
    explicit LambdaParam(double value) : value_(value) {
        if (!(value > 0.0 && value < 0.5)) {
            throw Error(ErrorCode::InvalidParameter,
                        "lambda must lie in the open interval (0, 1/2), got " + num(value));
        }
    }
    double value() const noexcept { return value_; }

private:
    double value_;
};

/// Lower volatility bound of the G-heat equation, restricted to (0, 1].
class SigmaParam {
public:
    explicit SigmaParam(double value) : value_(value) {
        if (!(value > 0.0 && value <= 1.0)) {
            throw Error(ErrorCode::InvalidParameter,
                        "sigma must lie in (0, 1], got " + num(value));
        }
    }
    double value() const noexcept { return value_; }

    // Several constructions (lambda_sigma, P_sigma) only exist for sigma < 1.
    void require_below_one(const char* what) const {
        if (!(value_ < 1.0)) {
            throw Error(ErrorCode::InvalidParameter,
                        std::string(what) + " requires sigma in (0, 1), got sigma = 1");
        }
    }

private:
    double value_;
};

}  // namespace gheat
