#pragma once

#include <vector>

namespace gheat {

/// n-point Gauss-Hermite rule for the weight exp(-x^2) on the real line
/// (physicists' convention): int e^{-x^2} f(x) dx ~ sum w_i f(x_i).
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussHermiteRule gauss_hermite(int n);

/// E[f(mean + sd Z)] for standard normal Z under an n-point rule.
template <class F>
double normal_expectation(const GaussHermiteRule& rule, const F& f, double mean, double sd) {
    constexpr double kInvSqrtPi = 0.56418958354775628695;
    constexpr double kSqrt2 = 1.41421356237309504880;
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(mean + kSqrt2 * sd * rule.nodes[i]);
    }
    return kInvSqrtPi * sum;
}

}  // namespace gheat
