#include "gheat/capacity.hpp"

#include "gheat/critical_points.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace gheat {

namespace {

constexpr double kDefaultCoarsenRatio = 32.0;
constexpr double kRampResolution = 16.0;  // nodes across the narrowest ramp

void require_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw Error(ErrorCode::InvalidParameter, "epsilon must lie in (0, 1), got " + num(epsilon));
    }
}

double trapezoid(double x, double flat_lo, double flat_hi, double zero_lo, double zero_hi) {
    if (x <= zero_lo || x >= zero_hi) return 0.0;
    if (x < flat_lo) return (x - zero_lo) / (flat_lo - zero_lo);
    if (x > flat_hi) return (zero_hi - x) / (zero_hi - flat_hi);
    return 1.0;
}

GridSpec multiscale_spec(const GridSpec& base, double core_min, double core_max, double t, double finest) {
    GridSpec s;
    s.dx = std::min(base.dx, finest);
    s.cfl = base.cfl;
    s.exec = base.exec;
    s.domain_factor = base.domain_factor;
    s.t_end = t;
    s.boundary = Boundary::DirichletConstant;
    const double reach = base.domain_factor * std::sqrt(t) + 1.0;
    s.x_min = std::min(core_min, 0.0) - reach;
    s.x_max = std::max(core_max, 0.0) + reach;
    Multiscale m;
    m.ratio = base.multiscale ? base.multiscale->ratio : kDefaultCoarsenRatio;
    m.core_min = core_min;
    m.core_max = core_max;
    s.multiscale = m;
    return s;
}

}  // namespace

ClosedFormConstants closed_form_constants(const PiecewiseSolution& p) {
    ClosedFormConstants k;
    k.sigma = p.sigma.value();
    k.lambda_sigma = p.lambda.value();
    k.p0 = eval_H(p, 0.0);
    k.p1 = eval_H(p, 1.0);
    k.mu1 = p.mu1;
    k.r_sigma = 4.0 * std::max(2.0, 0.5 * p.mu1);
    return k;
}

ClosedFormConstants closed_form_constants(SigmaParam sigma, double root_tol) {
    sigma.require_below_one("closed-form capacity bounds");
    return closed_form_constants(build_P(sigma, root_tol));
}

double capacity_upper_bound(const ClosedFormConstants& k, double epsilon) {
    require_epsilon(epsilon);
    return k.p0 / k.p1 * std::pow(epsilon, 2.0 * k.lambda_sigma);
}

double capacity_upper_bound(SigmaParam sigma, double epsilon) {
    require_epsilon(epsilon);
    return capacity_upper_bound(closed_form_constants(sigma), epsilon);
}

WidenedLowerBound capacity_lower_bound_widened(const ClosedFormConstants& k, double epsilon) {
    require_epsilon(epsilon);
    const double lam = k.lambda_sigma;
    const double arg = k.r_sigma * std::pow(epsilon, -2.0 * lam);
    if (!(arg > 1.0)) {
        throw Error(ErrorCode::InvalidParameter, "r eps^(-2 lambda) = " + num(arg) + " is not above 1");
    }
    return {epsilon * std::sqrt(2.0 * std::log(arg)), std::pow(2.0, -lam - 1.0) * std::pow(epsilon, 2.0 * lam)};
}

WidenedLowerBound capacity_lower_bound_widened(SigmaParam sigma, double epsilon) {
    require_epsilon(epsilon);
    return capacity_lower_bound_widened(closed_form_constants(sigma), epsilon);
}

InitialFn outer_ramp(double a, double b, double delta) {
    return [=](double x) { return trapezoid(x, a, b, a - delta, b + delta); };
}

InitialFn inner_ramp(double a, double b, double delta) {
    return [=](double x) { return trapezoid(x, a + delta, b - delta, a, b); };
}

Sandwich capacity_sandwich(SigmaParam sigma, double a, double b, double t, double delta, const GridSpec& spec) {
    if (!(delta > 0.0)) throw Error(ErrorCode::InvalidParameter, "ramp width must be positive");
    if (!(b - a > 2.0 * delta)) {
        throw Error(ErrorCode::DegenerateInterval,
                    "[" + num(a) + ", " + num(b) + "] is too short for ramp width " + num(delta));
    }
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidParameter, "capacity horizon must be positive");
    const GridSpec grid = multiscale_spec(spec, a - delta, b + delta, t, delta / kRampResolution);
    return {g_expectation(sigma, inner_ramp(a, b, delta), t, grid),
            g_expectation(sigma, outer_ramp(a, b, delta), t, grid)};
}

CapacityEstimate capacity_estimate(SigmaParam sigma, double a, double b, double t, double delta,
                                   const GridSpec& spec) {
    CapacityEstimate e;
    e.delta = delta;
    e.coarse = capacity_sandwich(sigma, a, b, t, delta, spec);
    e.fine = capacity_sandwich(sigma, a, b, t, 0.5 * delta, spec);
    e.lower_extrapolated = 2.0 * e.fine.lower - e.coarse.lower;
    e.upper_extrapolated = 2.0 * e.fine.upper - e.coarse.upper;
    e.point_estimate = 0.5 * (e.lower_extrapolated + e.upper_extrapolated);
    return e;
}

TimeScaling capacity_time_scaling_check(SigmaParam sigma, double a, double b, double t, double delta,
                                        const GridSpec& spec) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidParameter, "scaling check needs t > 0");
    TimeScaling out;
    out.lhs = capacity_estimate(sigma, a, b, t, delta, spec);
    if (t == 1.0) {
        out.rhs = out.lhs;
        return out;
    }
    const double root_t = std::sqrt(t);
    out.rhs = capacity_estimate(sigma, a / root_t, b / root_t, 1.0, delta / root_t, spec);
    return out;
}

CapacityReport capacity_report(SigmaParam sigma, double epsilon, const GridSpec& spec) {
    require_epsilon(epsilon);
    CapacityReport r;
    r.sigma = sigma.value();
    r.epsilon = epsilon;
    r.t = 1.0;
    r.ramp_delta = epsilon / 8.0;
    const CapacityEstimate e = capacity_estimate(sigma, -epsilon, epsilon, 1.0, r.ramp_delta, spec);
    r.sandwich_lower = e.fine.lower;
    r.sandwich_upper = e.fine.upper;
    r.lower_extrapolated = e.lower_extrapolated;
    r.upper_extrapolated = e.upper_extrapolated;
    r.point_estimate = e.point_estimate;

    if (sigma.value() < 1.0) {
        const ClosedFormConstants k = closed_form_constants(sigma);
        const WidenedLowerBound w = capacity_lower_bound_widened(k, epsilon);
        r.lambda_sigma = k.lambda_sigma;
        r.upper_bound_closed = capacity_upper_bound(k, epsilon);
        r.widened_half_width = w.half_width;
        r.lower_bound_widened = w.bound;
        const double dw = w.half_width / 8.0;
        r.widened_capacity_lower = capacity_sandwich(sigma, -w.half_width, w.half_width, 1.0, 0.5 * dw, spec).lower;
    }
    return r;
}

OrderFit order_fit(SigmaParam sigma, const std::vector<double>& epsilons, double t, const GridSpec& spec) {
    const std::size_t n = epsilons.size();
    if (n < 4) throw Error(ErrorCode::InvalidParameter, "order fit needs at least 4 epsilons");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(epsilons[i] > 0.0 && epsilons[i] < 0.5)) {
            throw Error(ErrorCode::InvalidParameter, "order fit epsilons must lie in (0, 0.5)");
        }
        if (i > 0 && !(epsilons[i] < epsilons[i - 1])) {
            throw Error(ErrorCode::InvalidParameter, "order fit epsilons must be strictly decreasing");
        }
    }
    if (!(epsilons.front() / epsilons.back() >= 8.0 * (1.0 - 1e-12))) {
        throw Error(ErrorCode::InvalidParameter, "order fit epsilons must span a factor of at least 8");
    }

    OrderFit fit;
    fit.sigma = sigma.value();
    fit.epsilons = epsilons;
    fit.estimates.assign(n, 0.0);
    std::vector<CapacityEstimate> cells(n);

    std::exception_ptr failure;
    const auto cells_n = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < cells_n; ++i) {
        try {
            const double eps = epsilons[i];
            cells[i] = capacity_estimate(sigma, -eps, eps, t, eps / 8.0, spec);
        } catch (...) {
#pragma omp critical(gheat_order_fit_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        const CapacityEstimate& c = cells[i];
        const double mid = c.point_estimate;
        if (!(mid > 0.0) || c.fine.upper - c.fine.lower > 0.5 * mid) {
            throw Error(ErrorCode::FitDegenerate, "capacity at eps = " + num(epsilons[i]) +
                                                      " is below the scheme resolution");
        }
        fit.estimates[i] = mid;
        lx[i] = std::log(epsilons[i]);
        ly[i] = std::log(mid);
    }

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
        syy += (ly[i] - my) * (ly[i] - my);
    }
    fit.estimated_exponent = sxy / sxx;
    fit.intercept = my - fit.estimated_exponent * mx;
    fit.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    fit.target_exponent = sigma.value() < 1.0 ? 2.0 * lambda_of_sigma(sigma) : 1.0;
    return fit;
}

}  // namespace gheat
