#pragma once

#include "gheat/pde_solver.hpp"
#include "gheat/solutions.hpp"

namespace gheat {

struct SelfSimilarError {
    double dx = 0.0;
    double max_error = 0.0;  // max |u - u^H| over |x| <= window at t
    double h0 = 0.0;         // H(0), the natural scale
    long long steps = 0;
};

/// Solves the G-heat equation from H with the exact self-similar boundary
/// values on the for_horizon(t) domain and compares with the closed form.
/// base supplies cfl, domain_factor and exec.
SelfSimilarError self_similar_error(const PiecewiseSolution& sol, double t, double dx, double window,
                                    const GridSpec& base = {});

struct ConvergenceStudy {
    SelfSimilarError coarse;  // dx
    SelfSimilarError fine;    // dx / 2
    double order = 0.0;       // log2(coarse / fine)
};

ConvergenceStudy self_similar_convergence(const PiecewiseSolution& sol, double t, double dx, double window,
                                          const GridSpec& base = {});

}  // namespace gheat
