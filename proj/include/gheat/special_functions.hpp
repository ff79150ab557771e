#pragma once

#include "gheat/exec.hpp"
#include "gheat/params.hpp"
#include "gheat/quadrature.hpp"

#include <span>
#include <vector>

namespace gheat {

/// phi_lambda(x) and its first two derivatives at one point.
struct PhiEval {
    double x = 0.0;
    double phi = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double err = 0.0;  // largest quadrature error estimate among the three

    /// phi'' + x phi' + 2 lambda phi, zero for the exact function.
    double ode_residual(LambdaParam lambda) const {
        return d2 + x * d1 + 2.0 * lambda.value() * phi;
    }
};

/// Coefficients of Psi(x) = mu1 phi(x) + mu2 phi(-x).
struct PsiCoefficients {
    double mu1 = 1.0;
    double mu2 = 0.0;
};

// phi_lambda(x) = int_0^inf y^(-2 lambda) exp(-(y - x)^2 / 2) dy, a positive
// solution of y'' + x y' + 2 lambda y = 0.

/// phi_lambda(x). Never negative; below the double range it reports 0.
double phi(LambdaParam lambda, double x, const QuadratureConfig& config = {});

/// log phi_lambda(x), finite for every finite x (scaled quadrature).
double log_phi(LambdaParam lambda, double x, const QuadratureConfig& config = {});

double phi_d1(LambdaParam lambda, double x, const QuadratureConfig& config = {});

/// phi'' evaluated through both integral representations,
///   p(t) = t^2 - 1   and   p(t) = -2 lambda - x t,
/// returning their mean. The two differ by an exact derivative, so any
/// disagreement beyond 10x the combined error estimates raises ConsistencyFailure.
double phi_d2(LambdaParam lambda, double x, const QuadratureConfig& config = {});

/// phi''' = (-2 lambda - 1) phi' - x phi'', cross-checked against
/// (x^2 - 2 lambda - 1) phi' + 2 lambda x phi.
double phi_d3(LambdaParam lambda, double x, const QuadratureConfig& config = {});

/// phi, phi', phi'' at x with the combined error estimate.
PhiEval phi_eval(LambdaParam lambda, double x, const QuadratureConfig& config = {});

/// k-th derivative (k = 0, 1, 2) of mu1 phi(x) + mu2 phi(-x).
double psi(LambdaParam lambda, PsiCoefficients coeffs, double x, int derivative_order,
           const QuadratureConfig& config = {});

/// phi_eval over a batch of abscissae. The parallel path splits the batch
/// across OpenMP threads; results are identical to the serial path.
std::vector<PhiEval> phi_eval_batch(LambdaParam lambda, std::span<const double> xs,
                                    Exec exec = Exec::Parallel, const QuadratureConfig& config = {});

}  // namespace gheat
