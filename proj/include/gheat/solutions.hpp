#pragma once

#include "gheat/critical_points.hpp"
#include "gheat/exec.hpp"
#include "gheat/params.hpp"
#include "gheat/quadrature.hpp"
#include "gheat/special_functions.hpp"

#include <span>
#include <vector>

namespace gheat {

// Within this distance of sigma_lambda, build_H uses the exact P_sigma
// coefficients (breakpoint -x1, mu2 = 0) instead of the general formula.
inline constexpr double kSigmaLambdaSnap = 1e-9;

// |mu2| below this is reported as 0.
inline constexpr double kMu2Clamp = 1e-12;

/// Even, positive C^2 solution of
///   (H'')^+ - sigma^2 (H'')^- + x H' + 2 lambda H = 0,
/// glued from three pieces:
///   x <= -b :  mu1 phi(x) + mu2 phi(-x)
///   |x| < b :  phi(x / sigma) + phi(-x / sigma)
///   x >= b  :  mu2 phi(x) + mu1 phi(-x)
/// with breakpoint b = sigma z. H'' vanishes at +-b and changes sign there.
struct PiecewiseSolution {
    LambdaParam lambda{0.25};
    SigmaParam sigma{0.5};
    double z = 0.0;
    double x1 = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double breakpoint = 0.0;
    // Residual of mu2 phi''(b) + mu1 phi''(-b) relative to its terms.
    double gluing_residual = 0.0;
    QuadratureConfig quadrature;
};

enum class Piece { Left, Middle, Right };

/// H_{lambda,sigma} for sigma in [sigma_lambda, 1). Throws RangeError below
/// sigma_lambda, where no positive solution of this form exists.
PiecewiseSolution build_H(LambdaParam lambda, SigmaParam sigma, double root_tol = kDefaultRootTol,
                          const QuadratureConfig& config = {});

/// Same, reusing already computed critical points.
PiecewiseSolution build_H(const CriticalPoints& cp, SigmaParam sigma, const QuadratureConfig& config = {});

/// P_sigma = H_{lambda_sigma, sigma}: breakpoint -x1, mu2 = 0 and
/// mu1 = [phi(x1/sigma) + phi(-x1/sigma)] / phi(x1).
PiecewiseSolution build_P(SigmaParam sigma, double root_tol = kDefaultRootTol,
                          const QuadratureConfig& config = {});

Piece piece_at(const PiecewiseSolution& sol, double x);

/// k-th derivative (k = 0, 1, 2) of one piece's formula, evaluated at x even
/// outside that piece's interval. Used for one-sided checks at the breakpoints.
double eval_piece(const PiecewiseSolution& sol, Piece piece, double x, int derivative_order);

double eval_H(const PiecewiseSolution& sol, double x, int derivative_order = 0);

struct HEval {
    double h = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

/// H, H', H'' at once (shares the quadratures).
HEval eval_H_all(const PiecewiseSolution& sol, double x);

std::vector<double> eval_H_batch(const PiecewiseSolution& sol, std::span<const double> xs,
                                 int derivative_order = 0, Exec exec = Exec::Parallel);

/// (H'')^+ - sigma^2 (H'')^- + x H' + 2 lambda H.
double ode_residual(const PiecewiseSolution& sol, double x);

/// (1 + t)^(-lambda) H(x / sqrt(1 + t)), an exact solution of the G-heat
/// equation with initial datum H.
double eval_self_similar(const PiecewiseSolution& sol, double t, double x);

struct HeatCheck {
    double closed_form = 0.0;
    double convolution = 0.0;       // 64-node Gauss-Hermite
    double convolution_fine = 0.0;  // 128 nodes, convergence check
};

/// sigma = 1: (1 + t)^(-lambda) Psi(x / sqrt(1 + t)) against E[Psi(x + sqrt(t) Z)].
/// Throws QuadratureFailure if the 64- and 128-node values disagree beyond 1e-8.
HeatCheck heat_check_sigma1(LambdaParam lambda, PsiCoefficients mu, double t, double x,
                            const QuadratureConfig& config = {});

}  // namespace gheat
