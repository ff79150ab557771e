#include "gheat/special_functions.hpp"

#include <algorithm>
#include <exception>
#include <cmath>
#include <string>

namespace gheat {

namespace {

struct DualD2 {
    double value;
    double err;
};

DualD2 phi_d2_checked(LambdaParam lambda, double x, const QuadratureConfig& config) {
    const double lam = lambda.value();
    const IntegralResult direct = moment_integral(lambda, x, ShiftedPoly{-1.0, 0.0, 1.0}, config);
    const IntegralResult via_ode = moment_integral(lambda, x, ShiftedPoly{-2.0 * lam, -x, 0.0}, config);
    const double combined = direct.error_estimate + via_ode.error_estimate;
    const double gap = std::abs(direct.value - via_ode.value);
    if (gap > 10.0 * combined) {
        throw Error(ErrorCode::ConsistencyFailure,
                    "phi'' representations disagree at x = " + num(x) + " (gap " +
                        num(gap) + ", error estimates " + num(combined) + ")");
    }
    return {0.5 * (direct.value + via_ode.value), std::max(combined, 0.5 * gap)};
}

}  // namespace

double phi(LambdaParam lambda, double x, const QuadratureConfig& config) {
    const IntegralResult r = moment_integral(lambda, x, ShiftedPoly::constant(1.0), config);
    return std::max(r.value, 0.0);
}

double log_phi(LambdaParam lambda, double x, const QuadratureConfig& config) {
    // For x < 0 factor out exp(-x^2/2): the scaled integrand exp(-y^2/2 + x y) stays in (0, 1].
    const double log_scale = x < 0.0 ? 0.5 * x * x : 0.0;
    const IntegralResult r = scaled_moment_integral(lambda, x, ShiftedPoly::constant(1.0), log_scale, config);
    if (!(r.value > 0.0)) {
        throw Error(ErrorCode::QuadratureFailure, "scaled phi integral is not positive at x = " + num(x));
    }
    return std::log(r.value) - log_scale;
}

double phi_d1(LambdaParam lambda, double x, const QuadratureConfig& config) {
    return moment_integral(lambda, x, ShiftedPoly{0.0, 1.0, 0.0}, config).value;
}

double phi_d2(LambdaParam lambda, double x, const QuadratureConfig& config) {
    return phi_d2_checked(lambda, x, config).value;
}

double phi_d3(LambdaParam lambda, double x, const QuadratureConfig& config) {
    const double lam = lambda.value();
    const IntegralResult f0 = moment_integral(lambda, x, ShiftedPoly::constant(1.0), config);
    const IntegralResult f1 = moment_integral(lambda, x, ShiftedPoly{0.0, 1.0, 0.0}, config);
    const DualD2 f2 = phi_d2_checked(lambda, x, config);

    const double from_d2 = (-2.0 * lam - 1.0) * f1.value - x * f2.value;
    const double from_phi = (x * x - 2.0 * lam - 1.0) * f1.value + 2.0 * lam * x * f0.value;
    const double bound = (2.0 * lam + 1.0) * f1.error_estimate + std::abs(x) * f2.err +
                         std::abs(x * x - 2.0 * lam - 1.0) * f1.error_estimate +
                         2.0 * lam * std::abs(x) * f0.error_estimate;
    if (std::abs(from_d2 - from_phi) > 10.0 * bound) {
        throw Error(ErrorCode::ConsistencyFailure,
                    "phi''' representations disagree at x = " + num(x));
    }
    return from_d2;
}

PhiEval phi_eval(LambdaParam lambda, double x, const QuadratureConfig& config) {
    const IntegralResult f0 = moment_integral(lambda, x, ShiftedPoly::constant(1.0), config);
    const IntegralResult f1 = moment_integral(lambda, x, ShiftedPoly{0.0, 1.0, 0.0}, config);
    const DualD2 f2 = phi_d2_checked(lambda, x, config);
    PhiEval e;
    e.x = x;
    e.phi = std::max(f0.value, 0.0);
    e.d1 = f1.value;
    e.d2 = f2.value;
    e.err = std::max({f0.error_estimate, f1.error_estimate, f2.err});
    return e;
}

double psi(LambdaParam lambda, PsiCoefficients coeffs, double x, int derivative_order,
           const QuadratureConfig& config) {
    const auto derivative = [&](double at) {
        switch (derivative_order) {
        case 0: return phi(lambda, at, config);
        case 1: return phi_d1(lambda, at, config);
        case 2: return phi_d2(lambda, at, config);
        default:
            throw Error(ErrorCode::InvalidParameter, "psi derivative order must be 0, 1 or 2");
        }
    };
    const double sign = derivative_order % 2 == 0 ? 1.0 : -1.0;
    double value = 0.0;
    if (coeffs.mu1 != 0.0) value += coeffs.mu1 * derivative(x);
    if (coeffs.mu2 != 0.0) value += sign * coeffs.mu2 * derivative(-x);
    return value;
}

std::vector<PhiEval> phi_eval_batch(LambdaParam lambda, std::span<const double> xs, Exec exec,
                                    const QuadratureConfig& config) {
    config.validate();
    std::vector<PhiEval> out(xs.size());
    const auto n = static_cast<std::ptrdiff_t>(xs.size());
    if (exec == Exec::Serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = phi_eval(lambda, xs[i], config);
        return out;
    }

    // Exceptions must not escape an OpenMP region; keep the first and rethrow.
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = phi_eval(lambda, xs[i], config);
        } catch (...) {
#pragma omp critical(gheat_phi_batch_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace gheat
