#include "gheat/solutions.hpp"

#include "gheat/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace gheat {

namespace {

constexpr double kGluingTol = 1e-8;

PiecewiseSolution exact_P_branch(const CriticalPoints& cp, SigmaParam sigma, const QuadratureConfig& config) {
    const LambdaParam lam = cp.lambda;
    const double s = sigma.value();
    PiecewiseSolution sol{lam, sigma, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, config};
    sol.x1 = cp.x1;
    sol.breakpoint = -cp.x1;
    sol.z = -cp.x1 / s;
    sol.mu1 = (phi(lam, cp.x1 / s, config) + phi(lam, -cp.x1 / s, config)) / phi(lam, cp.x1, config);
    sol.mu2 = 0.0;
    // Both sides of the gluing reduce to mu1 phi''(x1), zero up to the root tolerance.
    sol.gluing_residual = std::abs(sol.mu1 * phi_d2(lam, cp.x1, config)) / (sol.mu1 * phi(lam, cp.x1, config));
    return sol;
}

}  // namespace

PiecewiseSolution build_H(const CriticalPoints& cp, SigmaParam sigma, const QuadratureConfig& config) {
    sigma.require_below_one("build_H");
    const double s = sigma.value();
    if (s < cp.sigma_lambda - kSigmaLambdaSnap) {
        throw Error(ErrorCode::RangeError,
                    "sigma = " + num(s) + " is below sigma_lambda = " + num(cp.sigma_lambda) +
                        " for lambda = " + num(cp.lambda.value()) +
                        "; no positive solution exists for lambda > lambda_sigma");
    }
    if (s <= cp.sigma_lambda + kSigmaLambdaSnap) return exact_P_branch(cp, sigma, config);

    const LambdaParam lam = cp.lambda;
    const double b = s * cp.z;
    const double phi_p = phi(lam, b, config);
    const double phi_m = phi(lam, -b, config);
    const double d2_p = phi_d2(lam, b, config);
    const double d2_m = phi_d2(lam, -b, config);
    const double even = phi(lam, cp.z, config) + phi(lam, -cp.z, config);
    const double det = phi_m * d2_p - phi_p * d2_m;
    if (!(det < 0.0)) {
        throw Error(ErrorCode::ConsistencyFailure, "gluing determinant is not negative at b = " + num(b));
    }

    PiecewiseSolution sol{lam, sigma, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, config};
    sol.z = cp.z;
    sol.x1 = cp.x1;
    sol.breakpoint = b;
    sol.mu1 = d2_p * even / det;
    sol.mu2 = -d2_m * even / det;
    if (std::abs(sol.mu2) < kMu2Clamp) sol.mu2 = 0.0;

    const double glue = sol.mu2 * d2_p + sol.mu1 * d2_m;
    sol.gluing_residual = std::abs(glue) / (sol.mu2 * phi_p + sol.mu1 * phi_m);
    if (!(sol.gluing_residual <= kGluingTol) || !(sol.mu1 > 0.0) || !(sol.mu2 >= 0.0)) {
        throw Error(ErrorCode::ConsistencyFailure,
                    "gluing identity violated at b = " + num(b) + " (relative residual " +
                        num(sol.gluing_residual) + ")");
    }
    return sol;
}

PiecewiseSolution build_H(LambdaParam lambda, SigmaParam sigma, double root_tol, const QuadratureConfig& config) {
    sigma.require_below_one("build_H");
    return build_H(critical_points(lambda, root_tol, config), sigma, config);
}

PiecewiseSolution build_P(SigmaParam sigma, double root_tol, const QuadratureConfig& config) {
    sigma.require_below_one("build_P");
    // sigma_lambda has slope ~2 in lambda; the tighter lambda tolerance keeps
    // sigma_lambda within the snap window of sigma.
    const LambdaParam lam(lambda_of_sigma(sigma, 0.01 * root_tol, config));
    const CriticalPoints cp = critical_points(lam, root_tol, config);
    PiecewiseSolution sol = exact_P_branch(cp, sigma, config);
    if (!(sol.gluing_residual <= kGluingTol)) {
        throw Error(ErrorCode::ConsistencyFailure, "P_sigma gluing residual " + num(sol.gluing_residual));
    }
    return sol;
}

Piece piece_at(const PiecewiseSolution& sol, double x) {
    if (x <= -sol.breakpoint) return Piece::Left;
    if (x >= sol.breakpoint) return Piece::Right;
    return Piece::Middle;
}

double eval_piece(const PiecewiseSolution& sol, Piece piece, double x, int derivative_order) {
    if (derivative_order < 0 || derivative_order > 2) {
        throw Error(ErrorCode::InvalidParameter, "derivative order must be 0, 1 or 2");
    }
    const auto& q = sol.quadrature;
    switch (piece) {
    case Piece::Left: return psi(sol.lambda, {sol.mu1, sol.mu2}, x, derivative_order, q);
    case Piece::Right: return psi(sol.lambda, {sol.mu2, sol.mu1}, x, derivative_order, q);
    case Piece::Middle: {
        const double s = sol.sigma.value();
        return psi(sol.lambda, {1.0, 1.0}, x / s, derivative_order, q) / std::pow(s, derivative_order);
    }
    }
    return 0.0;
}

double eval_H(const PiecewiseSolution& sol, double x, int derivative_order) {
    return eval_piece(sol, piece_at(sol, x), x, derivative_order);
}

HEval eval_H_all(const PiecewiseSolution& sol, double x) {
    const auto& q = sol.quadrature;
    double scale = 1.0;
    double a = 1.0;  // coefficient of phi(u)
    double c = 1.0;  // coefficient of phi(-u)
    double u = x;
    switch (piece_at(sol, x)) {
    case Piece::Left: a = sol.mu1; c = sol.mu2; break;
    case Piece::Right: a = sol.mu2; c = sol.mu1; break;
    case Piece::Middle:
        scale = 1.0 / sol.sigma.value();
        u = x * scale;
        break;
    }
    HEval e;
    if (a != 0.0) {
        const PhiEval p = phi_eval(sol.lambda, u, q);
        e.h += a * p.phi;
        e.d1 += a * p.d1;
        e.d2 += a * p.d2;
    }
    if (c != 0.0) {
        const PhiEval m = phi_eval(sol.lambda, -u, q);
        e.h += c * m.phi;
        e.d1 -= c * m.d1;
        e.d2 += c * m.d2;
    }
    e.d1 *= scale;
    e.d2 *= scale * scale;
    return e;
}

std::vector<double> eval_H_batch(const PiecewiseSolution& sol, std::span<const double> xs, int derivative_order,
                                 Exec exec) {
    std::vector<double> out(xs.size());
    const auto n = static_cast<std::ptrdiff_t>(xs.size());
    if (exec == Exec::Serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = eval_H(sol, xs[i], derivative_order);
        return out;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = eval_H(sol, xs[i], derivative_order);
        } catch (...) {
#pragma omp critical(gheat_h_batch_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

double ode_residual(const PiecewiseSolution& sol, double x) {
    const HEval e = eval_H_all(sol, x);
    const double s2 = sol.sigma.value() * sol.sigma.value();
    const double g = e.d2 > 0.0 ? e.d2 : s2 * e.d2;
    return g + x * e.d1 + 2.0 * sol.lambda.value() * e.h;
}

double eval_self_similar(const PiecewiseSolution& sol, double t, double x) {
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidParameter, "time must be non-negative");
    if (t == 0.0) return eval_H(sol, x);
    return std::pow(1.0 + t, -sol.lambda.value()) * eval_H(sol, x / std::sqrt(1.0 + t));
}

HeatCheck heat_check_sigma1(LambdaParam lambda, PsiCoefficients mu, double t, double x,
                            const QuadratureConfig& config) {
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidParameter, "time must be non-negative");
    static const GaussHermiteRule rule64 = gauss_hermite(64);
    static const GaussHermiteRule rule128 = gauss_hermite(128);

    const auto psi0 = [&](double y) { return psi(lambda, mu, y, 0, config); };
    HeatCheck out;
    out.closed_form = std::pow(1.0 + t, -lambda.value()) * psi0(x / std::sqrt(1.0 + t));
    if (t == 0.0) {
        out.convolution = out.convolution_fine = psi0(x);
        return out;
    }
    const double sd = std::sqrt(t);
    out.convolution = normal_expectation(rule64, psi0, x, sd);
    out.convolution_fine = normal_expectation(rule128, psi0, x, sd);
    if (!(std::abs(out.convolution - out.convolution_fine) <= 1e-8 * (1.0 + std::abs(out.convolution_fine)))) {
        throw Error(ErrorCode::QuadratureFailure,
                    "Gauss-Hermite 64/128 disagree: " + num(out.convolution) + " vs " + num(out.convolution_fine));
    }
    return out;
}

}  // namespace gheat
