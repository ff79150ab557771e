#pragma once

#include "gheat/params.hpp"

#include <array>
#include <span>

namespace gheat {

struct QuadratureConfig {
    double abs_tol = 1e-12;
    // Boundary between the desingularised panel [0, split_point] and the smooth panels.
    double split_point = 1.0;
    // Minimum Gaussian tail cutoff T; integration stops at max(split_point, x) + T.
    double tail_cutoff_sigmas = 10.0;
    // Maximum bisection depth of any panel.
    int max_subdivisions = 60;

    void validate() const;
};

struct IntegralResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels_used = 0;
};

/// Polynomial p(t) = c0 + c1 t + c2 t^2 in the shifted variable t = y - x.
struct ShiftedPoly {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;

    constexpr double operator()(double t) const { return c0 + t * (c1 + t * c2); }

    static constexpr ShiftedPoly constant(double c) { return {c, 0.0, 0.0}; }
};

/// Computes  int_0^inf y^(-2 lambda) p(y - x) exp(-(y - x)^2 / 2) dy.
///
/// The y^(-2 lambda) endpoint singularity is removed on [0, split_point] by the
/// substitution y = s^(1 / (1 - 2 lambda)), which turns y^(-2 lambda) dy into a
/// constant multiple of ds. The remaining range up to max(split_point, x) + T is
/// integrated by adaptive bisection of 10-point Gauss-Legendre panels, each
/// accepted once its value agrees with the sum over its two halves. The Gaussian
/// tail beyond the cutoff is bounded analytically and the cutoff is pushed out
/// until that bound falls below abs_tol / 10.
///
/// Throws Error(NonConvergent) if the accumulated error estimate exceeds
/// 10 * abs_tol.
IntegralResult moment_integral(LambdaParam lambda, double x, ShiftedPoly poly,
                               const QuadratureConfig& config = {});

/// Same integral with the integrand multiplied by exp(log_scale). Lets callers
/// evaluate values far below the double range (e.g. phi at x = -50, ~e^-1250)
/// as exp(-log_scale) * result.
IntegralResult scaled_moment_integral(LambdaParam lambda, double x, ShiftedPoly poly,
                                      double log_scale, const QuadratureConfig& config = {});

/// Upper bound on |int_b^inf y^(-2 lambda) p(y - x) exp(-(y - x)^2/2) dy| for b > 0, b >= x.
double gaussian_tail_bound(LambdaParam lambda, double x, ShiftedPoly poly, double b);

namespace detail {

inline constexpr int kPanelOrder = 10;

struct GaussLegendreRule {
    std::array<double, kPanelOrder> nodes;
    std::array<double, kPanelOrder> weights;
};

/// Nodes and weights on [-1, 1], computed once by Newton iteration.
const GaussLegendreRule& gauss_legendre_rule();

}  // namespace detail

}  // namespace gheat
