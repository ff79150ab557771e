#include "gheat/pde_solver.hpp"
#include "gheat/solutions.hpp"
#include "gheat/verify.hpp"
#include "property.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace gheat;

namespace {

GridSpec coarse_spec(double t_end = 1.0, double dx = 0.02) {
    GridSpec s = GridSpec::for_horizon(t_end, dx);
    return s;
}

double bump(double x) { return std::exp(-x * x); }

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return ErrorCode::InvalidParameter;
}

}  // namespace

TEST_CASE("constant data stays constant") {
    const GridSpec spec = coarse_spec();
    const GridSolution sol = solve_gheat(SigmaParam(0.4), [](double) { return 1.75; }, spec);
    REQUIRE(sol.levels.size() == 2);
    for (const auto& level : sol.levels) {
        for (double v : level.u) CHECK(v == 1.75);
    }
    CHECK(sol.final_level().t == spec.t_end);
}

TEST_CASE("grid layout") {
    GridSpec spec = coarse_spec(0.5, 0.1);
    spec.save_every = 10;
    const GridSolution sol = solve_gheat(SigmaParam(0.5), bump, spec);
    const GridLevel& f = sol.final_level();
    CHECK(f.t == 0.5);
    CHECK(std::count(f.x.begin(), f.x.end(), 0.0) == 1);
    CHECK(f.x.front() == -f.x.back());
    CHECK(sol.levels.front().t == 0.0);
    // 0.5 / (0.4 * 0.01) = 125 steps
    CHECK(sol.steps == 125);
    CHECK(sol.levels.size() == 2 + 12);
    for (std::size_t i = 1; i < sol.levels.size(); ++i) CHECK(sol.levels[i].t > sol.levels[i - 1].t);
    CHECK(f.at(0.05) == doctest::Approx(0.5 * (f.at(0.0) + f.at(0.1))));
    CHECK(code_of([&] { f.at(100.0); }) == ErrorCode::RangeError);
}

TEST_CASE("final step is shortened to hit t_end") {
    GridSpec spec = coarse_spec(0.0123, 0.05);
    const GridSolution sol = solve_gheat(SigmaParam(0.5), bump, spec);
    CHECK(sol.final_level().t == 0.0123);
    CHECK(sol.steps == static_cast<long long>(std::ceil(0.0123 / (0.4 * 0.0025))));
}

TEST_CASE("heat case against the closed form") {
    const LambdaParam lam(0.25);
    const auto psi0 = [&](double x) { return psi(lam, {1.0, 1.0}, x, 0); };
    GridSpec spec = GridSpec::for_horizon(1.0, 0.01);
    const double u = g_expectation(SigmaParam(1.0), psi0, 1.0, spec);
    CHECK(std::abs(u - std::pow(2.0, -0.25) * psi0(0.0)) < 1e-3);
}

TEST_CASE("self-similar solution at coarse resolution") {
    const PiecewiseSolution p = build_P(SigmaParam(0.5));
    const SelfSimilarError e = self_similar_error(p, 1.0, 0.04, 4.0);
    CHECK(e.max_error <= 5e-3 * e.h0);
}

TEST_CASE("grid convergence") {
    const PiecewiseSolution h = build_H(LambdaParam(0.3), SigmaParam(0.8));
    const double e1 = self_similar_error(h, 0.5, 0.08, 3.0).max_error;
    const double e2 = self_similar_error(h, 0.5, 0.04, 3.0).max_error;
    const double e3 = self_similar_error(h, 0.5, 0.02, 3.0).max_error;
    CHECK(e2 < e1);
    CHECK(e3 < e2);
    CHECK(std::log2(e1 / e2) >= 0.9);
    CHECK(std::log2(e2 / e3) >= 0.9);
}

TEST_CASE("G-expectation of a ramp approaches the Gaussian probability") {
    const GridSpec spec = coarse_spec(1.0, 0.01);
    const double exact = std::erf(0.5 / std::sqrt(2.0));
    double prev_gap = 1.0;
    for (double w : {0.2, 0.1, 0.05}) {
        // 1 on [-0.5, 0.5], linear to 0 over width w on each side
        const auto ramp = [w](double x) { return std::clamp((0.5 + w - std::abs(x)) / w, 0.0, 1.0); };
        const double gap = std::abs(g_expectation(SigmaParam(1.0), ramp, 1.0, spec) - exact);
        CAPTURE(w);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.05);
}

TEST_CASE("cash translatability and positive homogeneity") {
    const GridSpec spec = coarse_spec();
    const auto f = [](double x) { return std::sin(2.0 * x) * std::exp(-0.1 * x * x); };
    const double base = g_expectation(SigmaParam(0.6), f, 1.0, spec);
    const double shifted = g_expectation(SigmaParam(0.6), [&](double x) { return f(x) + 0.37; }, 1.0, spec);
    const double doubled = g_expectation(SigmaParam(0.6), [&](double x) { return 2.0 * f(x); }, 1.0, spec);
    CHECK(std::abs(shifted - base - 0.37) <= 1e-12);
    CHECK(doubled == 2.0 * base);
}

TEST_CASE("discrete maximum principle") {
    testing::Gen gen(testing::kSeed + 20);
    for (int trial = 0; trial < 5; ++trial) {
        const double a = gen.uniform(-2.0, 2.0);
        const double b = gen.uniform(0.5, 3.0);
        const auto f = [&](double x) { return std::clamp(std::sin(b * x + a), -0.5, 0.8); };
        const GridSolution sol = solve_gheat(SigmaParam(gen.uniform(0.1, 1.0)), f, coarse_spec(0.5));
        const auto& u0 = sol.levels.front().u;
        const auto [lo, hi] = std::minmax_element(u0.begin(), u0.end());
        for (double v : sol.final_level().u) {
            CHECK(v >= *lo);
            CHECK(v <= *hi);
        }
    }
}

TEST_CASE("comparison in sigma: more volatility uncertainty, larger expectation") {
    // G_sigma(a) decreases with sigma for a < 0, so E_sigma is non-increasing in sigma.
    testing::Gen gen(testing::kSeed + 21);
    const GridSpec spec = coarse_spec();
    for (int trial = 0; trial < 4; ++trial) {
        const double c = gen.uniform(-1.0, 1.0);
        const double w = gen.uniform(0.5, 2.0);
        const auto f = [&](double x) { return std::max(0.0, 1.0 - std::abs(x - c) / w); };
        double prev = g_expectation(SigmaParam(0.2), f, 1.0, spec);
        for (double s : {0.4, 0.6, 0.8, 1.0}) {
            const double v = g_expectation(SigmaParam(s), f, 1.0, spec);
            CAPTURE(trial);
            CAPTURE(s);
            CHECK(v <= prev + 1e-10);
            prev = v;
        }
    }
}

TEST_CASE("scaling identity") {
    GridSpec base;
    base.dx = 0.01;
    const ScalingCheck same = scaling_check(SigmaParam(0.7), bump, 1.0, base);
    CHECK(same.lhs == same.rhs);

    const ScalingCheck s = scaling_check(SigmaParam(0.7), bump, 4.0, base);
    CHECK(std::abs(s.lhs - s.rhs) <= 5e-3);

    // sigma = 1: E[exp(-(sqrt(t) Z)^2)] = 1 / sqrt(1 + 2t)
    const ScalingCheck h = scaling_check(SigmaParam(1.0), bump, 2.0, base);
    CHECK(std::abs(h.lhs - 1.0 / std::sqrt(5.0)) <= 5e-3);
    CHECK(std::abs(h.rhs - 1.0 / std::sqrt(5.0)) <= 5e-3);
}

TEST_CASE("multiscale grid agrees with a uniform fine grid") {
    const auto ramp = [](double x) { return std::clamp((0.2 - std::abs(x)) / 0.05, 0.0, 1.0); };
    GridSpec fine = GridSpec::for_horizon(1.0, 0.005);
    GridSpec multi = fine;
    multi.x_min = -10.0;
    multi.x_max = 10.0;
    multi.multiscale = Multiscale{32.0, -0.2, 0.2};
    const GridSolution m = solve_gheat(SigmaParam(0.5), ramp, multi);
    const double a = g_expectation(SigmaParam(0.5), ramp, 1.0, fine);
    CHECK(std::abs(m.final_level().at(0.0) - a) < 1e-3);
    CHECK(m.final_level().dx > multi.dx);
    CHECK(m.final_level().t == 1.0);
}

TEST_CASE("serial and parallel solves agree bitwise") {
    GridSpec spec = coarse_spec(0.3, 0.01);
    spec.exec = Exec::Serial;
    const GridSolution a = solve_gheat(SigmaParam(0.45), bump, spec);
    spec.exec = Exec::Parallel;
    const GridSolution b = solve_gheat(SigmaParam(0.45), bump, spec);
    CHECK(a.final_level().u == b.final_level().u);
}

TEST_CASE("callback boundaries") {
    GridSpec spec = coarse_spec(0.2, 0.05);
    spec.boundary = Boundary::DirichletCallback;
    spec.boundary_fn = [](double t, double) { return 1.0 + t; };
    const GridSolution sol = solve_gheat(SigmaParam(1.0), [](double) { return 1.0; }, spec);
    CHECK(sol.final_level().u.front() == doctest::Approx(1.2));
    CHECK(sol.final_level().u.back() == doctest::Approx(1.2));
}

TEST_CASE("grid and stability errors") {
    const auto one = [](double) { return 1.0; };
    GridSpec s = coarse_spec();
    s.cfl = 0.6;
    CHECK(code_of([&] { solve_gheat(SigmaParam(1.0), one, s); }) == ErrorCode::InvalidGrid);
    s = coarse_spec();
    s.x_min = 0.5;
    CHECK(code_of([&] { solve_gheat(SigmaParam(1.0), one, s); }) == ErrorCode::InvalidGrid);
    s = coarse_spec();
    s.dx = 0.0;
    CHECK(code_of([&] { solve_gheat(SigmaParam(1.0), one, s); }) == ErrorCode::InvalidGrid);
    s = coarse_spec();
    s.boundary = Boundary::DirichletCallback;
    CHECK(code_of([&] { solve_gheat(SigmaParam(1.0), one, s); }) == ErrorCode::InvalidGrid);
    s = coarse_spec();
    s.dx = 10.0;
    CHECK(code_of([&] { solve_gheat(SigmaParam(1.0), one, s); }) == ErrorCode::InvalidGrid);
    s = coarse_spec();
    s.multiscale = Multiscale{2.0, 0.0, 0.0};
    CHECK(code_of([&] { solve_gheat(SigmaParam(1.0), one, s); }) == ErrorCode::InvalidGrid);

    s = coarse_spec(0.1);
    CHECK(code_of([&] {
              solve_gheat(SigmaParam(1.0), [](double x) { return x > 1.0 ? std::nan("") : 0.0; }, s);
          }) == ErrorCode::UnstableDetected);
    s.boundary = Boundary::DirichletCallback;
    s.boundary_fn = [](double t, double) { return t > 0.05 ? HUGE_VAL : 0.0; };
    CHECK(code_of([&] { solve_gheat(SigmaParam(1.0), one, s); }) == ErrorCode::UnstableDetected);

    CHECK(code_of([&] { g_expectation(SigmaParam(1.0), one, 2.0, coarse_spec(1.0)); }) ==
          ErrorCode::InvalidParameter);
    CHECK(g_expectation(SigmaParam(1.0), bump, 0.0, coarse_spec()) == 1.0);
}
