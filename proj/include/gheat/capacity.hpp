#pragma once

#include "gheat/params.hpp"
#include "gheat/pde_solver.hpp"
#include "gheat/solutions.hpp"

#include <optional>
#include <vector>

namespace gheat {

/// Constants entering the closed-form capacity bounds for sigma in (0, 1).
struct ClosedFormConstants {
    double sigma = 0.0;
    double lambda_sigma = 0.0;
    double p0 = 0.0;   // P_sigma(0)
    double p1 = 0.0;   // P_sigma(1)
    double mu1 = 0.0;  // outer coefficient of P_sigma
    double r_sigma = 0.0;  // 4 max(2, mu1 / 2)
};

ClosedFormConstants closed_form_constants(SigmaParam sigma, double root_tol = kDefaultRootTol);
ClosedFormConstants closed_form_constants(const PiecewiseSolution& p);

/// c_sigma([-eps, eps]) <= (P(0) / P(1)) eps^(2 lambda_sigma), eps in (0, 1).
double capacity_upper_bound(SigmaParam sigma, double epsilon);
double capacity_upper_bound(const ClosedFormConstants& k, double epsilon);

struct WidenedLowerBound {
    double half_width = 0.0;  // eps sqrt(2 ln(r eps^(-2 lambda)))
    double bound = 0.0;       // 2^(-lambda - 1) eps^(2 lambda)
};

/// c_sigma([-w, w]) >= 2^(-lambda_sigma - 1) eps^(2 lambda_sigma) with w the
/// widened half-width. InvalidParameter unless r eps^(-2 lambda) > 1.
WidenedLowerBound capacity_lower_bound_widened(SigmaParam sigma, double epsilon);
WidenedLowerBound capacity_lower_bound_widened(const ClosedFormConstants& k, double epsilon);

/// Trapezoidal ramps around I_[a,b]: the outer one is 1 on [a, b] and 0 off
/// [a - delta, b + delta]; the inner one is 1 on [a + delta, b - delta] and 0 off [a, b].
InitialFn outer_ramp(double a, double b, double delta);
InitialFn inner_ramp(double a, double b, double delta);

struct Sandwich {
    double lower = 0.0;  // E[inner ramp]
    double upper = 0.0;  // E[outer ramp]
};

/// Brackets c_sigma^t([a, b]) between G-expectations of the two ramps. Uses a
/// multiscale grid starting from dx = min(spec.dx, delta / 16); spec supplies
/// dx, cfl, domain_factor, exec and the coarsening ratio.
/// DegenerateInterval if b - a <= 2 delta.
Sandwich capacity_sandwich(SigmaParam sigma, double a, double b, double t, double delta, const GridSpec& spec);

/// Sandwiches at delta and delta / 2 with Richardson extrapolation
/// 2 S(delta / 2) - S(delta) of each side. The point estimate is the midpoint
/// of the extrapolated pair; `fine` is the raw, ordered bracket.
struct CapacityEstimate {
    double delta = 0.0;
    Sandwich coarse;
    Sandwich fine;
    double lower_extrapolated = 0.0;
    double upper_extrapolated = 0.0;
    double point_estimate = 0.0;
};

CapacityEstimate capacity_estimate(SigmaParam sigma, double a, double b, double t, double delta,
                                   const GridSpec& spec);

struct TimeScaling {
    CapacityEstimate lhs;  // [a, b] at horizon t
    CapacityEstimate rhs;  // [a / sqrt(t), b / sqrt(t)] at horizon 1, delta / sqrt(t)
};

TimeScaling capacity_time_scaling_check(SigmaParam sigma, double a, double b, double t, double delta,
                                        const GridSpec& spec);

struct CapacityReport {
    double sigma = 0.0;
    double epsilon = 0.0;
    double t = 1.0;
    double ramp_delta = 0.0;
    double sandwich_lower = 0.0;
    double sandwich_upper = 0.0;
    double lower_extrapolated = 0.0;
    double upper_extrapolated = 0.0;
    double point_estimate = 0.0;
    // Closed-form pieces; absent for sigma = 1.
    std::optional<double> lambda_sigma;
    std::optional<double> upper_bound_closed;
    std::optional<double> widened_half_width;
    std::optional<double> lower_bound_widened;
    std::optional<double> widened_capacity_lower;  // raw inner-ramp value on [-w, w]
};

/// Everything about c_sigma([-eps, eps]) at t = 1 with delta = eps / 8.
CapacityReport capacity_report(SigmaParam sigma, double epsilon, const GridSpec& spec);

struct OrderFit {
    double sigma = 0.0;
    std::vector<double> epsilons;
    std::vector<double> estimates;  // point estimates
    double estimated_exponent = 0.0;
    double target_exponent = 0.0;  // 2 lambda_sigma; 1 at sigma = 1
    double intercept = 0.0;
    double r2 = 0.0;
};

/// Least-squares slope of log(point estimate) against log(eps). Needs at least
/// 4 strictly decreasing epsilons below 0.5 spanning a factor of 8 or more.
/// FitDegenerate when an estimate is non-positive or its raw bracket is wider
/// than half the estimate. The epsilon cells run in parallel.
OrderFit order_fit(SigmaParam sigma, const std::vector<double>& epsilons, double t, const GridSpec& spec);

}  // namespace gheat
