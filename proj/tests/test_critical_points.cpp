#include "gheat/critical_points.hpp"
#include "gheat/special_functions.hpp"
#include "oracle_values.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace gheat;

TEST_CASE("lambda = 0.25 against the high-precision oracle") {
    const CriticalPoints cp = critical_points(LambdaParam(0.25));
    CHECK(std::abs(cp.x1 - oracle::kX1_l025) < 1e-8);
    CHECK(std::abs(cp.x2 - oracle::kX2_l025) < 1e-8);
    CHECK(std::abs(cp.z - oracle::kZ_l025) < 1e-8);
    CHECK(std::abs(cp.sigma_lambda - oracle::kSigma_l025) < 1e-8);
    CHECK(cp.x1_bracket.width() <= cp.root_tol);
    CHECK(cp.x1_bracket.lo <= cp.x1);
    CHECK(cp.x1 <= cp.x1_bracket.hi);
    CHECK(cp.in_supported_range);
}

TEST_CASE("limits in lambda") {
    const CriticalPoints hi = critical_points(LambdaParam(0.45));
    CHECK(hi.x1 < -0.8);
    CHECK(hi.x2 > 1.0);
    CHECK(hi.x2 < 1.5);
    CHECK(hi.z > 1.0);
    CHECK(hi.z < 1.3);
    CHECK(hi.sigma_lambda > 0.7);

    const CriticalPoints lo = critical_points(LambdaParam(0.05));
    CHECK(lo.x1 > -0.2);
    CHECK(lo.x2 > 2.5);
    CHECK(lo.x2 > hi.x2 + 1.0);
    CHECK(lo.sigma_lambda < 0.3);

    CHECK_FALSE(critical_points(LambdaParam(0.01)).in_supported_range);
}

TEST_CASE("sigma_lambda against the oracle and between its neighbours") {
    const double s2 = sigma_of_lambda(LambdaParam(0.2));
    const double s25 = sigma_of_lambda(LambdaParam(0.25));
    const double s3 = sigma_of_lambda(LambdaParam(0.3));
    CHECK(std::abs(s2 - oracle::kSigma_l020) < 1e-8);
    CHECK(std::abs(s3 - oracle::kSigma_l030) < 1e-8);
    CHECK(s2 < s25);
    CHECK(s25 < s3);
    CHECK(s25 > 0.0);
    CHECK(s25 < 1.0);
}

TEST_CASE("ordering and monotone sweeps on the lambda grid") {
    std::vector<CriticalPoints> cps;
    for (int k = 1; k <= 9; ++k) cps.push_back(critical_points(LambdaParam(0.05 * k)));
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const auto& c = cps[i];
        CAPTURE(c.lambda.value());
        CHECK(-1.0 < c.x1);
        CHECK(c.x1 < 0.0);
        CHECK(-c.x1 < c.z);
        CHECK(c.z < c.x2);
        CHECK(c.z > 1.0);
        CHECK(c.sigma_lambda == doctest::Approx(-c.x1 / c.z).epsilon(1e-15));
        if (i > 0) {
            CHECK(c.x1 < cps[i - 1].x1);
            CHECK(c.x2 < cps[i - 1].x2);
            CHECK(c.z < cps[i - 1].z);
            CHECK(c.sigma_lambda > cps[i - 1].sigma_lambda);
        }
    }
}

TEST_CASE("lambda_of_sigma") {
    CHECK(std::abs(lambda_of_sigma(SigmaParam(0.3)) - oracle::kLambda_s03) < 1e-8);
    CHECK(std::abs(lambda_of_sigma(SigmaParam(0.5)) - oracle::kLambda_s05) < 1e-8);
    CHECK(std::abs(lambda_of_sigma(SigmaParam(0.7)) - oracle::kLambda_s07) < 1e-8);

    const double l5 = lambda_of_sigma(SigmaParam(0.5));
    CHECK(l5 > 0.125);
    CHECK(std::abs(sigma_of_lambda(LambdaParam(l5)) - 0.5) < 1e-6);
    CHECK(lambda_of_sigma(SigmaParam(0.9)) > 0.405);

    double prev = 0.0;
    for (int k = 1; k <= 9; ++k) {
        const double s = 0.1 * k;
        const double l = lambda_of_sigma(SigmaParam(s));
        CAPTURE(s);
        CHECK(l > 0.5 * s * s + 1e-10);
        CHECK(l > prev);
        prev = l;
    }
}

TEST_CASE("lambda_of_sigma outside the cached table") {
    // The table spans sigma_0.02 .. sigma_0.48; both ends fall back to the hard search limits.
    for (double s : {0.02, 0.99}) {
        CAPTURE(s);
        const double l = lambda_of_sigma(SigmaParam(s));
        CHECK(std::abs(sigma_of_lambda(LambdaParam(l)) - s) < 1e-8);
    }
}

TEST_CASE("sigma table") {
    const auto& t = sigma_table();
    REQUIRE(t.size() == 41);
    CHECK(t.front().lambda == doctest::Approx(kSupportedLambdaMin));
    CHECK(t.back().lambda == doctest::Approx(kSupportedLambdaMax));
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i].sigma > t[i - 1].sigma);
    CHECK(&sigma_table() == &t);
}

TEST_CASE("z2 diagnostic") {
    const LambdaParam q(0.25);
    const CriticalPoints cp = critical_points(q);
    CHECK(std::abs(find_z2_diagnostic(q, 1.0) - cp.z) <= 2e-10);
    CHECK(std::abs(find_z2_diagnostic(q, 3.0) - oracle::kZ2_l025_k3) < 1e-8);
    for (double l : {0.1, 0.25, 0.4}) CHECK(find_z2_diagnostic(LambdaParam(l), 2.0) > 1.0);
}

TEST_CASE("error paths") {
    const LambdaParam q(0.25);
    const auto code_of = [](auto&& f) {
        try {
            f();
        } catch (const Error& e) {
            return e.code();
        }
        FAIL("no error raised");
        return ErrorCode::InvalidParameter;
    };
    CHECK(code_of([&] { find_x1(q, 0.0); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([&] { find_x2(q, -1.0); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([&] { find_z(q, -2.0, 1.5); }) == ErrorCode::BracketFailure);
    CHECK(code_of([&] { lambda_of_sigma(SigmaParam(1.0)); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([&] { SigmaParam(0.0); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([&] { SigmaParam(1.5); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([&] { find_z2_diagnostic(q, 0.5); }) == ErrorCode::InvalidParameter);
    CHECK(code_of([&] { bisect([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-6); }) ==
          ErrorCode::BracketFailure);
}

TEST_CASE("bisection") {
    const Root r = bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-13);
    CHECK(std::abs(r.value - std::sqrt(2.0)) < 1e-13);
    CHECK(r.bracket.width() <= 1e-13);
    CHECK(bisect([](double x) { return x; }, -1.0, 3.0, 1e-12).value == doctest::Approx(0.0).epsilon(1e-12));
}
