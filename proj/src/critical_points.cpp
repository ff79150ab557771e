#include "gheat/critical_points.hpp"

#include "gheat/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace gheat {

namespace {

// Hard limits for the lambda_of_sigma bracket when sigma falls outside the table.
constexpr double kLambdaSearchMin = 0.005;
constexpr double kLambdaSearchMax = 0.499;
constexpr int kSigmaTableSize = 41;

}  // namespace

bool lambda_in_supported_range(double lambda) {
    return lambda >= kSupportedLambdaMin && lambda <= kSupportedLambdaMax;
}

bool sigma_in_supported_range(double sigma) {
    return sigma >= kSupportedSigmaMin && sigma <= kSupportedSigmaMax;
}

Root find_x1(LambdaParam lambda, double tol, const QuadratureConfig& config) {
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "root tolerance must be positive");
    const auto f = [&](double x) { return phi_d2(lambda, x, config); };
    const double lo = -1.0 + 1e-12;
    const double hi = -1e-12;
    if (!(f(lo) > 0.0 && f(hi) < 0.0)) {
        throw Error(ErrorCode::BracketFailure, "phi'' does not change sign from + to - on (-1, 0)");
    }
    return bisect(f, lo, hi, tol);
}

Root find_x2(LambdaParam lambda, double tol, const QuadratureConfig& config) {
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "root tolerance must be positive");
    const auto f = [&](double x) { return phi_d2(lambda, x, config); };
    if (!(f(1.0) < 0.0)) throw Error(ErrorCode::BracketFailure, "phi''(1) is not negative");
    double lo = 1.0;
    double hi = 2.0;
    while (!(f(hi) > 0.0)) {
        if (hi >= kX2ScanLimit) {
            throw Error(ErrorCode::ScanExhausted,
                        "phi'' stays non-positive up to x = 64 for lambda = " + num(lambda.value()));
        }
        lo = hi;
        hi *= 2.0;
    }
    return bisect(f, lo, hi, tol);
}

Root find_z(LambdaParam lambda, double x1, double x2, double tol, const QuadratureConfig& config) {
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "root tolerance must be positive");
    const auto even = [&](double x) { return phi_d2(lambda, x, config) + phi_d2(lambda, -x, config); };
    const double lo = -x1;
    const double hi = x2;
    if (!(lo < hi) || !(even(lo) < 0.0 && even(hi) > 0.0)) {
        throw Error(ErrorCode::BracketFailure, "phi''(x) + phi''(-x) does not change sign on (-x1, x2)");
    }
    return bisect(even, lo, hi, tol);
}

CriticalPoints critical_points(LambdaParam lambda, double tol, const QuadratureConfig& config) {
    CriticalPoints cp;
    cp.lambda = lambda;
    cp.root_tol = tol;
    const Root x1 = find_x1(lambda, tol, config);
    const Root x2 = find_x2(lambda, tol, config);
    const Root z = find_z(lambda, x1.value, x2.value, tol, config);
    cp.x1 = x1.value;
    cp.x2 = x2.value;
    cp.z = z.value;
    cp.x1_bracket = x1.bracket;
    cp.x2_bracket = x2.bracket;
    cp.z_bracket = z.bracket;
    cp.sigma_lambda = -cp.x1 / cp.z;
    cp.in_supported_range = lambda_in_supported_range(lambda.value());
    return cp;
}

double sigma_of_lambda(LambdaParam lambda, double tol, const QuadratureConfig& config) {
    return critical_points(lambda, tol, config).sigma_lambda;
}

const std::vector<SigmaTableEntry>& sigma_table() {
    static const std::vector<SigmaTableEntry> table = [] {
        std::vector<SigmaTableEntry> t(kSigmaTableSize);
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
        for (int i = 0; i < kSigmaTableSize; ++i) {
            const double lam = kSupportedLambdaMin +
                               (kSupportedLambdaMax - kSupportedLambdaMin) * i / (kSigmaTableSize - 1);
            try {
                t[i] = {lam, sigma_of_lambda(LambdaParam(lam))};
            } catch (...) {
#pragma omp critical(gheat_sigma_table_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
        return t;
    }();
    return table;
}

double lambda_of_sigma(SigmaParam sigma, double tol, const QuadratureConfig& config) {
    const double s = sigma.value();
    if (!(s < 1.0)) {
        throw Error(ErrorCode::InvalidParameter, "lambda_sigma is defined for sigma in (0, 1); sigma = 1 is a limit");
    }
    if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "root tolerance must be positive");

    const auto& table = sigma_table();
    double lo = kLambdaSearchMin;
    double hi = kLambdaSearchMax;
    const auto above = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.sigma >= s; });
    if (above != table.end()) {
        if (above->sigma == s) return above->lambda;
        hi = above->lambda;
        if (above != table.begin()) lo = std::prev(above)->lambda;
    } else {
        lo = table.back().lambda;
    }

    // Root tolerance in x stays well below the lambda tolerance so sigma_lambda
    // is monotone at the resolution of the bisection.
    const double inner_tol = std::min(kDefaultRootTol, 0.01 * tol);
    const auto f = [&](double lam) { return sigma_of_lambda(LambdaParam(lam), inner_tol, config) - s; };
    return bisect(f, lo, hi, tol).value;
}

double find_z2_diagnostic(LambdaParam lambda, double k, double tol, const QuadratureConfig& config) {
    if (!(k >= 1.0)) throw Error(ErrorCode::InvalidParameter, "k must be at least 1");
    const Root x1 = find_x1(lambda, tol, config);
    const Root x2 = find_x2(lambda, tol, config);
    const auto f = [&](double x) { return k * phi_d2(lambda, x, config) + phi_d2(lambda, -x, config); };
    // Psi_k'' < 0 on [0, -x1] and > 0 on [x2, inf); the zero in between is unique.
    return bisect(f, -x1.value, x2.value, tol).value;
}

}  // namespace gheat
