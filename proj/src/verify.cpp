#include "gheat/verify.hpp"

#include <algorithm>
#include <cmath>

namespace gheat {

SelfSimilarError self_similar_error(const PiecewiseSolution& sol, double t, double dx, double window,
                                    const GridSpec& base) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidParameter, "verification horizon must be positive");
    GridSpec spec = GridSpec::for_horizon(t, dx, base.domain_factor);
    spec.cfl = base.cfl;
    spec.exec = base.exec;
    spec.boundary = Boundary::DirichletCallback;
    spec.boundary_fn = [&](double tt, double x) { return eval_self_similar(sol, tt, x); };

    const GridSolution res = solve_gheat(sol.sigma, [&](double x) { return eval_H(sol, x); }, spec);
    const GridLevel& level = res.final_level();
    SelfSimilarError out;
    out.dx = dx;
    out.h0 = eval_H(sol, 0.0);
    out.steps = res.steps;
    for (std::size_t i = 0; i < level.x.size(); ++i) {
        if (std::abs(level.x[i]) <= window + 1e-12) {
            out.max_error = std::max(out.max_error, std::abs(level.u[i] - eval_self_similar(sol, t, level.x[i])));
        }
    }
    return out;
}

ConvergenceStudy self_similar_convergence(const PiecewiseSolution& sol, double t, double dx, double window,
                                          const GridSpec& base) {
    ConvergenceStudy c;
    c.coarse = self_similar_error(sol, t, dx, window, base);
    c.fine = self_similar_error(sol, t, 0.5 * dx, window, base);
    c.order = std::log2(c.coarse.max_error / c.fine.max_error);
    return c;
}

}  // namespace gheat
