#include "gheat/solutions.hpp"
#include "oracle_values.hpp"
#include "property.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace gheat;

namespace {

const PiecewiseSolution& p_half() {
    static const PiecewiseSolution p = build_P(SigmaParam(0.5));
    return p;
}

}  // namespace

TEST_CASE("H at sigma = sigma_lambda is P") {
    const CriticalPoints cp = critical_points(LambdaParam(0.25));
    const PiecewiseSolution h = build_H(cp, SigmaParam(cp.sigma_lambda));
    CHECK(h.breakpoint == -cp.x1);
    CHECK(h.mu2 == 0.0);
    CHECK(piece_at(h, 0.9 * h.breakpoint) == Piece::Middle);
    CHECK(piece_at(h, -1.1 * h.breakpoint) == Piece::Left);
    CHECK(piece_at(h, 1.1 * h.breakpoint) == Piece::Right);
}

TEST_CASE("coefficient signs and oracle values") {
    const PiecewiseSolution h = build_H(LambdaParam(0.2), SigmaParam(0.9));
    CHECK(h.mu1 > 0.0);
    CHECK(h.mu2 >= 0.0);

    const CriticalPoints cp = critical_points(LambdaParam(0.25));
    const PiecewiseSolution g = build_H(cp, SigmaParam(cp.sigma_lambda + 0.05));
    CHECK(g.mu1 == doctest::Approx(oracle::kMu1_l025_sp005).epsilon(1e-7));
    CHECK(g.mu2 == doctest::Approx(oracle::kMu2_l025_sp005).epsilon(1e-7));
    CHECK(g.gluing_residual <= 1e-8);
    CHECK(g.breakpoint == doctest::Approx(g.sigma.value() * g.z).epsilon(1e-15));
}

TEST_CASE("symmetry and values at the origin") {
    const PiecewiseSolution h = build_H(LambdaParam(0.3), SigmaParam(0.8));
    for (double x : {0.1, 0.5, h.breakpoint, 1.3, 4.0}) {
        CAPTURE(x);
        CHECK(eval_H(h, x, 0) == doctest::Approx(eval_H(h, -x, 0)).epsilon(1e-14));
        CHECK(eval_H(h, x, 1) == doctest::Approx(-eval_H(h, -x, 1)).epsilon(1e-14));
        CHECK(eval_H(h, x, 2) == doctest::Approx(eval_H(h, -x, 2)).epsilon(1e-12).scale(1.0));
    }
    CHECK(eval_H(h, 0.0) == doctest::Approx(2.0 * phi(h.lambda, 0.0)).epsilon(1e-15));
    CHECK_THROWS_AS(eval_H(h, 0.0, 3), Error);
}

TEST_CASE("second derivative vanishes at the breakpoints from both sides") {
    for (double l : {0.1, 0.25, 0.4}) {
        const CriticalPoints cp = critical_points(LambdaParam(l));
        for (double s : {cp.sigma_lambda, 0.5 * (cp.sigma_lambda + 1.0)}) {
            const PiecewiseSolution h = build_H(cp, SigmaParam(s));
            CAPTURE(l);
            CAPTURE(s);
            for (double b : {h.breakpoint, -h.breakpoint}) {
                const Piece outer = b > 0 ? Piece::Right : Piece::Left;
                CHECK(std::abs(eval_piece(h, Piece::Middle, b, 2)) < 1e-7);
                CHECK(std::abs(eval_piece(h, outer, b, 2)) < 1e-7);
                // C^1: both formulas share value and slope at the joint.
                CHECK(eval_piece(h, Piece::Middle, b, 0) == doctest::Approx(eval_piece(h, outer, b, 0)).epsilon(1e-12));
                CHECK(eval_piece(h, Piece::Middle, b, 1) == doctest::Approx(eval_piece(h, outer, b, 1)).epsilon(1e-9));
                const double dh = 1e-6;
                const double left_q = (eval_H(h, b) - eval_H(h, b - dh)) / dh;
                const double right_q = (eval_H(h, b + dh) - eval_H(h, b)) / dh;
                CHECK(std::abs(left_q - right_q) < 1e-5);
            }
        }
    }
}

TEST_CASE("P_sigma") {
    const PiecewiseSolution& p = p_half();
    CHECK(p.mu2 == 0.0);
    CHECK(p.breakpoint == -p.x1);
    CHECK(p.lambda.value() == doctest::Approx(oracle::kLambda_s05).epsilon(1e-10));
    CHECK(p.mu1 == doctest::Approx(oracle::kMu1P_s05).epsilon(1e-8));
    CHECK(eval_H(p, 0.0) == doctest::Approx(oracle::kP0_s05).epsilon(1e-8));
    CHECK(eval_H(p, 1.0) == doctest::Approx(oracle::kP1_s05).epsilon(1e-8));

    const double s = p.sigma.value();
    const LambdaParam lam = p.lambda;
    const double closed = (phi(lam, p.x1 / s) + phi(lam, -p.x1 / s)) / phi(lam, p.x1);
    CHECK(p.mu1 == doctest::Approx(closed).epsilon(1e-14));

    double prev = eval_H(p, 0.0);
    for (double x = 0.05; x < 10.0; x += 0.05) {
        const double v = eval_H(p, x);
        CAPTURE(x);
        CHECK(v < prev);
        CHECK(v == doctest::Approx(eval_H(p, -x)).epsilon(1e-14));
        prev = v;
    }
    CHECK(eval_H(p, 5.0) < 0.5 * p.mu1 * eval_H(p, 0.0) * std::exp(-12.5));
    CHECK(eval_H(p, 25.0) < 1e-8 * eval_H(p, 0.0));
    // Outer piece has the single-phi form.
    CHECK(eval_H(p, 3.0) == doctest::Approx(p.mu1 * phi(lam, -3.0)).epsilon(1e-14));

    const double cases[2][4] = {{0.3, oracle::kP0_s03, oracle::kP1_s03, oracle::kMu1P_s03},
                                {0.7, oracle::kP0_s07, oracle::kP1_s07, oracle::kMu1P_s07}};
    for (const auto& [sig, p0, p1, mu1] : cases) {
        const PiecewiseSolution q = build_P(SigmaParam(sig));
        CAPTURE(sig);
        CHECK(eval_H(q, 0.0) == doctest::Approx(p0).epsilon(1e-8));
        CHECK(eval_H(q, 1.0) == doctest::Approx(p1).epsilon(1e-8));
        CHECK(q.mu1 == doctest::Approx(mu1).epsilon(1e-8));
    }
}

TEST_CASE("ODE residual") {
    const PiecewiseSolution h = build_H(LambdaParam(0.25), SigmaParam(0.7));
    const double r0 = ode_residual(h, 0.0);
    CHECK(eval_H(h, 0.0, 2) < 0.0);
    CHECK(std::abs(r0) < 1e-9);
    CHECK(eval_H(h, 3.0 * h.breakpoint, 2) > 0.0);
    CHECK(std::abs(ode_residual(h, 3.0 * h.breakpoint)) < 1e-9);

    testing::Gen gen(testing::kSeed + 2);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double x = gen.uniform(-10.0, 10.0);
        const double tol = std::abs(std::abs(x) - h.breakpoint) < 1e-6 ? 1e-5 : 1e-7 * (1.0 + eval_H(h, x));
        const double r = std::abs(ode_residual(h, x));
        CAPTURE(x);
        CHECK(r <= tol);
        worst = std::max(worst, r);
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("positivity and convexity pattern on a parameter grid") {
    for (double l : {0.05, 0.2, 0.35, 0.45}) {
        const CriticalPoints cp = critical_points(LambdaParam(l));
        for (double s : {cp.sigma_lambda, 0.5 * (cp.sigma_lambda + 1.0), 0.98}) {
            if (s >= 1.0) continue;
            const PiecewiseSolution h = build_H(cp, SigmaParam(s));
            CAPTURE(l);
            CAPTURE(s);
            for (int i = 0; i <= 400; ++i) {
                const double x = -20.0 + 0.1 * i;
                CHECK(eval_H(h, x) > 0.0);
                if (std::abs(std::abs(x) - h.breakpoint) < 1e-3) continue;
                const double d2 = eval_H(h, x, 2);
                if (std::abs(x) < h.breakpoint) {
                    CHECK(d2 < 0.0);
                } else {
                    CHECK(d2 > 0.0);
                }
            }
        }
    }
}

TEST_CASE("no solution below sigma_lambda") {
    const CriticalPoints cp = critical_points(LambdaParam(0.4));
    try {
        build_H(cp, SigmaParam(cp.sigma_lambda - 1e-3));
        FAIL("no error raised");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::RangeError);
    }
    CHECK_THROWS_AS(build_H(LambdaParam(0.25), SigmaParam(1.0)), Error);
    CHECK_THROWS_AS(build_P(SigmaParam(1.0)), Error);
}

TEST_CASE("self-similar solution") {
    const PiecewiseSolution& p = p_half();
    const double l = p.lambda.value();
    for (double x : {-2.0, 0.0, 0.4, 3.0}) CHECK(eval_self_similar(p, 0.0, x) == eval_H(p, x));
    CHECK(eval_self_similar(p, 3.0, 0.0) == doctest::Approx(std::pow(4.0, -l) * eval_H(p, 0.0)).epsilon(1e-15));
    const double eps = 0.1;
    CHECK(eval_self_similar(p, 1.0 / (eps * eps), 0.0) <= std::pow(eps, 2.0 * l) * eval_H(p, 0.0));
    CHECK_THROWS_AS(eval_self_similar(p, -1.0, 0.0), Error);
}

TEST_CASE("sigma = 1 heat check") {
    const HeatCheck at0 = heat_check_sigma1(LambdaParam(0.3), {1.0, 1.0}, 0.0, 0.7);
    CHECK(at0.closed_form == at0.convolution);
    const HeatCheck a = heat_check_sigma1(LambdaParam(0.25), {1.0, 1.0}, 1.0, 0.0);
    CHECK(std::abs(a.closed_form - a.convolution) < 1e-6);
    const HeatCheck b = heat_check_sigma1(LambdaParam(0.4), {1.0, 0.0}, 2.0, 1.0);
    CHECK(std::abs(b.closed_form - b.convolution) < 1e-6);
    CHECK(std::abs(b.convolution - b.convolution_fine) < 1e-8);
}

TEST_CASE("batch evaluation of H: serial and parallel agree bitwise") {
    const PiecewiseSolution& p = p_half();
    std::vector<double> xs;
    for (int i = -50; i <= 50; ++i) xs.push_back(0.13 * i);
    for (int order = 0; order <= 2; ++order) {
        const auto s = eval_H_batch(p, xs, order, Exec::Serial);
        const auto q = eval_H_batch(p, xs, order, Exec::Parallel);
        for (std::size_t i = 0; i < xs.size(); ++i) CHECK(s[i] == q[i]);
    }
    const HEval e = eval_H_all(p, 0.9);
    CHECK(e.h == doctest::Approx(eval_H(p, 0.9, 0)).epsilon(1e-14));
    CHECK(e.d1 == doctest::Approx(eval_H(p, 0.9, 1)).epsilon(1e-12));
    CHECK(e.d2 == doctest::Approx(eval_H(p, 0.9, 2)).epsilon(1e-11));
}
