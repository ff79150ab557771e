#pragma once

#include "gheat/params.hpp"
#include "gheat/quadrature.hpp"

#include <vector>

namespace gheat {

inline constexpr double kDefaultRootTol = 1e-10;

// Guarantees hold on these ranges; outside them the root finders run
// best-effort and flag the result.
inline constexpr double kSupportedLambdaMin = 0.02;
inline constexpr double kSupportedLambdaMax = 0.48;
inline constexpr double kSupportedSigmaMin = 0.05;
inline constexpr double kSupportedSigmaMax = 0.98;

// The doubling scan for x2 stops here.
inline constexpr double kX2ScanLimit = 64.0;

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
};

/// Sign-change root located by bisection, with the final bracket.
struct Root {
    double value = 0.0;
    Bracket bracket;
};

/// Per-lambda constants: the inflection points x1 < 0 < 1 < x2 of phi_lambda,
/// the positive zero z of phi''(x) + phi''(-x), and sigma_lambda = -x1 / z.
struct CriticalPoints {
    LambdaParam lambda{0.25};
    double x1 = 0.0;
    double x2 = 0.0;
    double z = 0.0;
    double sigma_lambda = 0.0;
    double root_tol = kDefaultRootTol;
    Bracket x1_bracket;
    Bracket x2_bracket;
    Bracket z_bracket;
    bool in_supported_range = true;
};

bool lambda_in_supported_range(double lambda);
bool sigma_in_supported_range(double sigma);

/// Bisection for a continuous f with f(lo), f(hi) of opposite sign. Stops once
/// the bracket is narrower than tol.
template <class F>
Root bisect(const F& f, double lo, double hi, double tol) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (!(flo * fhi < 0.0)) {
        throw Error(ErrorCode::BracketFailure, "no sign change on [" + num(lo) + ", " +
                                                   num(hi) + "]");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        const double fm = f(mid);
        if (fm == 0.0) return {mid, {mid, mid}};
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return {0.5 * (lo + hi), {lo, hi}};
}

/// Unique zero of phi'' in (-1, 0).
Root find_x1(LambdaParam lambda, double tol = kDefaultRootTol, const QuadratureConfig& config = {});

/// Unique zero of phi'' in (1, inf). Throws ScanExhausted if phi'' is still
/// non-positive at kX2ScanLimit.
Root find_x2(LambdaParam lambda, double tol = kDefaultRootTol, const QuadratureConfig& config = {});

/// Unique zero of phi''(x) + phi''(-x) in (-x1, x2).
Root find_z(LambdaParam lambda, double x1, double x2, double tol = kDefaultRootTol,
            const QuadratureConfig& config = {});

CriticalPoints critical_points(LambdaParam lambda, double tol = kDefaultRootTol,
                               const QuadratureConfig& config = {});

double sigma_of_lambda(LambdaParam lambda, double tol = kDefaultRootTol, const QuadratureConfig& config = {});

/// The unique lambda with sigma_lambda = sigma, for sigma in (0, 1).
double lambda_of_sigma(SigmaParam sigma, double tol = kDefaultRootTol, const QuadratureConfig& config = {});

/// Smallest zero of k phi''(x) + phi''(-x) in (-x1, x2), k >= 1.
double find_z2_diagnostic(LambdaParam lambda, double k, double tol = kDefaultRootTol,
                          const QuadratureConfig& config = {});

struct SigmaTableEntry {
    double lambda;
    double sigma;
};

/// sigma_lambda on 41 equally spaced lambdas spanning the supported range.
/// Built once per process (OpenMP across entries) and read-only afterwards.
const std::vector<SigmaTableEntry>& sigma_table();

}  // namespace gheat
