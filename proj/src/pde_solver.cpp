#include "gheat/pde_solver.hpp"

#include "gheat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace gheat {

namespace {

constexpr long long kMaxNodes = 50'000'000;
constexpr int kFiniteCheckStride = 64;

struct ActiveGrid {
    long long i_lo = 0;
    long long i_hi = 0;
    double dx = 0.0;
    std::vector<double> u;

    double x(long long i) const { return static_cast<double>(i) * dx; }
    std::size_t size() const { return u.size(); }
};

GridLevel snapshot(const ActiveGrid& g, double t) {
    GridLevel level;
    level.t = t;
    level.dx = g.dx;
    level.u = g.u;
    level.x.resize(g.u.size());
    for (std::size_t k = 0; k < g.u.size(); ++k) level.x[k] = g.x(g.i_lo + static_cast<long long>(k));
    return level;
}

void require_finite(const std::vector<double>& u, double t) {
    for (double v : u) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::UnstableDetected, "non-finite value at t = " + num(t));
        }
    }
}

// Index range of the nodes i dx inside [lo, hi].
std::pair<long long, long long> index_range(double lo, double hi, double dx) {
    const long long a = static_cast<long long>(std::ceil(lo / dx - 1e-9));
    const long long b = static_cast<long long>(std::floor(hi / dx + 1e-9));
    if (b - a + 1 < 3) throw Error(ErrorCode::InvalidGrid, "domain holds fewer than 3 nodes");
    if (b - a + 1 > kMaxNodes) throw Error(ErrorCode::InvalidGrid, "domain holds too many nodes");
    return {a, b};
}

// Active domain for a stage ending at tau.
std::pair<double, double> stage_domain(const GridSpec& spec, double tau) {
    if (!spec.multiscale) return {spec.x_min, spec.x_max};
    const double reach = spec.domain_factor * std::sqrt(tau);
    const double lo = std::min(spec.multiscale->core_min, 0.0) - reach;
    const double hi = std::max(spec.multiscale->core_max, 0.0) + reach;
    return {std::max(spec.x_min, lo), std::min(spec.x_max, hi)};
}

// New grid at spacing dx on [lo, hi]; nodes shared with the old grid keep
// their values, the rest start from the initial datum.
ActiveGrid regrid(const ActiveGrid* old, double dx, double lo, double hi, const InitialFn& initial) {
    const auto [a, b] = index_range(lo, hi, dx);
    ActiveGrid g{a, b, dx, std::vector<double>(static_cast<std::size_t>(b - a + 1))};
    const long long factor = old ? std::llround(dx / old->dx) : 1;
    for (long long i = a; i <= b; ++i) {
        double& v = g.u[static_cast<std::size_t>(i - a)];
        const long long j = i * factor;
        if (old && j >= old->i_lo && j <= old->i_hi) {
            v = old->u[static_cast<std::size_t>(j - old->i_lo)];
        } else {
            v = initial(g.x(i));
        }
    }
    return g;
}

}  // namespace

void GridSpec::validate() const {
    if (!(x_min < 0.0 && 0.0 < x_max)) throw Error(ErrorCode::InvalidGrid, "need x_min < 0 < x_max");
    if (!(dx > 0.0) || !std::isfinite(dx)) throw Error(ErrorCode::InvalidGrid, "dx must be positive");
    if (!(cfl > 0.0 && cfl <= 0.5)) throw Error(ErrorCode::InvalidGrid, "cfl must lie in (0, 0.5]");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error(ErrorCode::InvalidGrid, "t_end must be >= 0");
    if (save_every < 0) throw Error(ErrorCode::InvalidGrid, "save_every must be >= 0");
    if (boundary == Boundary::DirichletCallback && !boundary_fn) {
        throw Error(ErrorCode::InvalidGrid, "callback boundary without a boundary function");
    }
    if (multiscale) {
        if (boundary != Boundary::DirichletConstant) {
            throw Error(ErrorCode::InvalidGrid, "multiscale grids need constant boundaries");
        }
        if (!(multiscale->ratio >= 4.0)) throw Error(ErrorCode::InvalidGrid, "coarsening ratio must be >= 4");
        if (!(multiscale->core_min <= multiscale->core_max)) {
            throw Error(ErrorCode::InvalidGrid, "multiscale core is empty");
        }
        if (!(domain_factor > 0.0)) throw Error(ErrorCode::InvalidGrid, "domain_factor must be positive");
    }
}

GridSpec GridSpec::for_horizon(double t_end, double dx, double domain_factor) {
    GridSpec spec;
    spec.t_end = t_end;
    spec.dx = dx;
    spec.domain_factor = domain_factor;
    spec.x_max = domain_factor * std::sqrt(1.0 + t_end);
    spec.x_min = -spec.x_max;
    return spec;
}

double GridLevel::at(double xq) const {
    if (x.empty() || !(xq >= x.front() && xq <= x.back())) {
        throw Error(ErrorCode::RangeError, "x = " + num(xq) + " lies outside the grid");
    }
    const double pos = (xq - x.front()) / dx;
    const auto k = std::min(static_cast<std::size_t>(pos), x.size() - 2);
    const double w = pos - static_cast<double>(k);
    if (w == 0.0) return u[k];
    return (1.0 - w) * u[k] + w * u[k + 1];
}

GridSolution solve_gheat(SigmaParam sigma, const InitialFn& initial, const GridSpec& spec) {
    spec.validate();
    if (!initial) throw Error(ErrorCode::InvalidParameter, "missing initial datum");
    const double sigma2 = sigma.value() * sigma.value();

    GridSolution sol;
    sol.spec = spec;

    const auto stage_end = [&](double dx) {
        if (!spec.multiscale) return spec.t_end;
        const double s = spec.multiscale->ratio * 2.0 * dx;
        return std::min(spec.t_end, s * s);
    };

    double dx = spec.dx;
    double tau = stage_end(dx);
    auto [lo, hi] = stage_domain(spec, tau);
    ActiveGrid grid = regrid(nullptr, dx, lo, hi, initial);
    require_finite(grid.u, 0.0);
    sol.levels.push_back(snapshot(grid, 0.0));

    std::vector<double> next(grid.size());
    double t = 0.0;
    for (;;) {
        const double dt = spec.cfl * dx * dx;
        const double x_first = grid.x(grid.i_lo);
        const double x_last = grid.x(grid.i_hi);
        next.resize(grid.size());
        while (t < tau) {
            const double t_next = (tau - t <= dt * (1.0 + 1e-12)) ? tau : t + dt;
            const double r = (t_next - t) / (dx * dx);
            gheat_step(grid.u, next, sigma2, r, spec.exec);
            if (spec.boundary == Boundary::DirichletCallback) {
                next.front() = spec.boundary_fn(t_next, x_first);
                next.back() = spec.boundary_fn(t_next, x_last);
            }
            grid.u.swap(next);
            t = t_next;
            ++sol.steps;
            if (sol.steps % kFiniteCheckStride == 0) require_finite(grid.u, t);
            if (spec.save_every > 0 && sol.steps % spec.save_every == 0 && t < spec.t_end) {
                sol.levels.push_back(snapshot(grid, t));
            }
        }
        if (tau >= spec.t_end) break;

        dx *= 2.0;
        tau = stage_end(dx);
        std::tie(lo, hi) = stage_domain(spec, tau);
        grid = regrid(&grid, dx, lo, hi, initial);
    }
    require_finite(grid.u, t);
    if (spec.t_end > 0.0) sol.levels.push_back(snapshot(grid, t));
    return sol;
}

double g_expectation(SigmaParam sigma, const InitialFn& phi, double t, const GridSpec& spec) {
    if (!(t >= 0.0 && t <= spec.t_end)) {
        throw Error(ErrorCode::InvalidParameter, "horizon t = " + num(t) + " outside [0, t_end]");
    }
    GridSpec s = spec;
    s.t_end = t;
    s.save_every = 0;
    return solve_gheat(sigma, phi, s).final_level().at(0.0);
}

ScalingCheck scaling_check(SigmaParam sigma, const InitialFn& phi, double t, const GridSpec& base) {
    if (!(t > 0.0)) throw Error(ErrorCode::InvalidParameter, "scaling check needs t > 0");
    const auto with_base = [&](double horizon) {
        GridSpec s = GridSpec::for_horizon(horizon, base.dx, base.domain_factor);
        s.cfl = base.cfl;
        s.exec = base.exec;
        return s;
    };
    ScalingCheck out;
    out.lhs = g_expectation(sigma, phi, t, with_base(t));
    if (t == 1.0) {
        out.rhs = out.lhs;
        return out;
    }
    const double root_t = std::sqrt(t);
    const InitialFn scaled = [&](double x) { return phi(root_t * x); };
    out.rhs = g_expectation(sigma, scaled, 1.0, with_base(1.0));
    return out;
}

}  // namespace gheat
