#pragma once

#include "gheat/exec.hpp"
#include "gheat/params.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace gheat {

using InitialFn = std::function<double(double x)>;
using BoundaryFn = std::function<double(double t, double x)>;

enum class Boundary {
    DirichletConstant,  // end nodes keep their initial values
    DirichletCallback,  // end nodes set from boundary_fn(t, x) after every step
};

/// Grid coarsening for data that is rough only at t = 0 (indicator ramps).
/// The solution at time t is smooth on the scale sqrt(t), so once
/// sqrt(t) >= ratio * 2 dx the grid drops every other node (dx -> 2 dx).
/// Between coarsenings the active domain covers the core plus
/// domain_factor * sqrt(t_stage_end) on each side; nodes entering the domain
/// take the initial value.
struct Multiscale {
    double ratio = 32.0;
    double core_min = 0.0;
    double core_max = 0.0;
};

struct GridSpec {
    double x_min = -6.0;
    double x_max = 6.0;
    double dx = 0.01;
    double t_end = 1.0;
    // dt = cfl dx^2. The scheme is monotone for cfl <= 1; the cap of 0.5 keeps a 2x margin.
    double cfl = 0.4;
    Boundary boundary = Boundary::DirichletConstant;
    BoundaryFn boundary_fn;
    // Steps between saved levels; 0 keeps only t = 0 and t_end.
    int save_every = 0;
    std::optional<Multiscale> multiscale;
    double domain_factor = 6.0;
    Exec exec = Exec::Parallel;

    void validate() const;

    /// Symmetric domain |x| <= domain_factor sqrt(1 + t_end).
    static GridSpec for_horizon(double t_end, double dx, double domain_factor = 6.0);
};

/// Nodes are x_i = i dx, so every grid contains x = 0 and is symmetric when the
/// domain is.
struct GridLevel {
    double t = 0.0;
    double dx = 0.0;
    std::vector<double> x;
    std::vector<double> u;

    /// Linear interpolation; RangeError outside [x.front(), x.back()].
    double at(double xq) const;
};

struct GridSolution {
    GridSpec spec;
    std::vector<GridLevel> levels;
    long long steps = 0;

    const GridLevel& final_level() const { return levels.back(); }
};

/// Explicit monotone scheme for u_t = G(u_xx), G(a) = (a^+ - sigma^2 a^-) / 2:
///   u_i <- u_i + dt G((u_{i+1} - 2 u_i + u_{i-1}) / dx^2),  dt = cfl dx^2,
/// with the last step shortened so t_end is hit exactly.
/// Throws UnstableDetected on any non-finite value, InvalidGrid on a bad spec.
GridSolution solve_gheat(SigmaParam sigma, const InitialFn& initial, const GridSpec& spec);

/// E_sigma^t[phi] = u^phi(t, 0), solving directly to horizon t (t <= spec.t_end).
double g_expectation(SigmaParam sigma, const InitialFn& phi, double t, const GridSpec& spec);

struct ScalingCheck {
    double lhs = 0.0;  // E^t[phi]
    double rhs = 0.0;  // E^1[phi(sqrt(t) .)]
};

/// Both sides on for_horizon domains sharing base.dx, base.cfl and base.exec.
ScalingCheck scaling_check(SigmaParam sigma, const InitialFn& phi, double t, const GridSpec& base);

}  // namespace gheat
