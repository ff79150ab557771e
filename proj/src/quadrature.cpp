#include "gheat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace gheat {

void QuadratureConfig::validate() const {
    if (!(abs_tol > 0.0)) throw Error(ErrorCode::InvalidParameter, "abs_tol must be positive");
    if (!(split_point > 0.0)) throw Error(ErrorCode::InvalidParameter, "split_point must be positive");
    if (!(tail_cutoff_sigmas >= 6.0)) {
        throw Error(ErrorCode::InvalidParameter, "tail_cutoff_sigmas must be at least 6");
    }
    if (max_subdivisions < 1) throw Error(ErrorCode::InvalidParameter, "max_subdivisions must be >= 1");
}

namespace detail {

const GaussLegendreRule& gauss_legendre_rule() {
    static const GaussLegendreRule rule = [] {
        GaussLegendreRule r{};
        constexpr int n = kPanelOrder;
        for (int i = 0; i < n; ++i) {
            double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0;
                double p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = pk;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double step = p1 / dp;
                x -= step;
                if (std::abs(step) < 1e-16) break;
            }
            r.nodes[i] = x;
            r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        return r;
    }();
    return rule;
}

}  // namespace detail

namespace {

constexpr double kRoundoffFactor = 64.0 * std::numeric_limits<double>::epsilon();

struct PanelValue {
    double value;
    double l1;  // integral of |f|, drives the roundoff estimate
};

template <class F>
PanelValue panel(const F& f, double a, double b) {
    const auto& rule = detail::gauss_legendre_rule();
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    double abs_sum = 0.0;
    for (int i = 0; i < detail::kPanelOrder; ++i) {
        const double fx = f(mid + half * rule.nodes[i]);
        sum += rule.weights[i] * fx;
        abs_sum += rule.weights[i] * std::abs(fx);
    }
    return {sum * half, abs_sum * half};
}

struct Accumulator {
    double value = 0.0;
    double error = 0.0;
    int panels = 0;
};

// Accepts [a, b] once the coarse panel value matches the sum over its halves to
// within tol_density * (b - a), or to within roundoff of the panel's L1 mass.
template <class F>
void adapt(const F& f, double a, double b, PanelValue coarse, double tol_density,
           int depth, int max_depth, Accumulator& acc) {
    const double m = 0.5 * (a + b);
    const PanelValue left = panel(f, a, m);
    const PanelValue right = panel(f, m, b);
    const double fine = left.value + right.value;
    const double diff = std::abs(fine - coarse.value);
    const double roundoff = kRoundoffFactor * (left.l1 + right.l1);
    if (diff <= std::max(tol_density * (b - a), roundoff) || depth >= max_depth || !(m > a && m < b)) {
        acc.value += fine;
        acc.error += diff + roundoff;
        acc.panels += 2;
        return;
    }
    adapt(f, a, m, left, tol_density, depth + 1, max_depth, acc);
    adapt(f, m, b, right, tol_density, depth + 1, max_depth, acc);
}

template <class F>
void integrate_partition(const F& f, const std::vector<double>& pts, double tol, int max_depth,
                         Accumulator& acc) {
    const double total = pts.back() - pts.front();
    if (!(total > 0.0)) return;
    const double density = tol / total;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i];
        const double b = pts[i + 1];
        if (!(b > a)) continue;
        adapt(f, a, b, panel(f, a, b), density, 0, max_depth, acc);
    }
}

double scaled_tail_bound(LambdaParam lambda, double x, ShiftedPoly poly, double b, double log_scale) {
    const double u = b - x;
    const double gauss = std::exp(log_scale - 0.5 * u * u);
    // int_u^inf e^{-t^2/2} <= e^{-u^2/2}/u ;  int t e^{-t^2/2} = e^{-u^2/2} ;
    // int t^2 e^{-t^2/2} = u e^{-u^2/2} + int e^{-t^2/2}.
    const double poly_bound = std::abs(poly.c0) / u + std::abs(poly.c1) + std::abs(poly.c2) * (u + 1.0 / u);
    return std::pow(b, -2.0 * lambda.value()) * poly_bound * gauss;
}

}  // namespace

double gaussian_tail_bound(LambdaParam lambda, double x, ShiftedPoly poly, double b) {
    return scaled_tail_bound(lambda, x, poly, b, 0.0);
}

IntegralResult scaled_moment_integral(LambdaParam lambda, double x, ShiftedPoly poly,
                                      double log_scale, const QuadratureConfig& config) {
    config.validate();
    if (!std::isfinite(x)) throw Error(ErrorCode::InvalidParameter, "x must be finite");

    const double lam = lambda.value();
    const double alpha = 1.0 / (1.0 - 2.0 * lam);
    const double split = config.split_point;

    // The tail is bounded analytically; push the cutoff out until the bound is
    // negligible against the tolerance.
    double cutoff = std::max(split, x) + config.tail_cutoff_sigmas;
    double tail = scaled_tail_bound(lambda, x, poly, cutoff, log_scale);
    while (tail >= 0.1 * config.abs_tol) {
        cutoff += 1.0;
        tail = scaled_tail_bound(lambda, x, poly, cutoff, log_scale);
    }

    Accumulator acc;
    const double tol_each = 0.45 * config.abs_tol;

    // [0, split] in s = y^(1 - 2 lambda): y^(-2 lambda) dy = alpha ds.
    const auto singular = [&](double s) {
        const double y = std::pow(s, alpha);
        const double t = y - x;
        return alpha * poly(t) * std::exp(log_scale - 0.5 * t * t);
    };
    const double s_max = std::pow(split, 1.0 - 2.0 * lam);
    std::vector<double> spts{0.0, s_max};
    const auto add_singular_break = [&](double y) {
        if (y > 0.0 && y < split) spts.push_back(std::pow(y, 1.0 - 2.0 * lam));
    };
    add_singular_break(x);
    if (x < -1.0) {
        // Mass concentrates within ~1/|x| of the origin.
        add_singular_break(1.0 / -x);
        add_singular_break(8.0 / -x);
    }
    std::sort(spts.begin(), spts.end());
    integrate_partition(singular, spts, tol_each, config.max_subdivisions, acc);

    // [split, cutoff] is smooth; break at the Gaussian peak and its flanks.
    const auto smooth = [&](double y) {
        const double t = y - x;
        return std::pow(y, -2.0 * lam) * poly(t) * std::exp(log_scale - 0.5 * t * t);
    };
    std::vector<double> ypts{split, cutoff};
    for (double b : {x - config.tail_cutoff_sigmas, x - 3.0, x, x + 3.0}) {
        if (b > split && b < cutoff) ypts.push_back(b);
    }
    std::sort(ypts.begin(), ypts.end());
    integrate_partition(smooth, ypts, tol_each, config.max_subdivisions, acc);

    IntegralResult result{acc.value, acc.error + tail, acc.panels};
    if (!std::isfinite(result.value) || result.error_estimate > 10.0 * config.abs_tol) {
        throw Error(ErrorCode::NonConvergent,
                    "moment integral at x = " + num(x) + " has error estimate " +
                        num(result.error_estimate) + " above 10 * abs_tol");
    }
    return result;
}

IntegralResult moment_integral(LambdaParam lambda, double x, ShiftedPoly poly,
                               const QuadratureConfig& config) {
    return scaled_moment_integral(lambda, x, poly, 0.0, config);
}

}  // namespace gheat
