#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "tumor/errors.hpp"
#include "tumor/oracles.hpp"
#include "tumor/singular_ivp.hpp"

using namespace tumor;

namespace {
SingularProblem linear(double gamma_c, double theta, double x0 = 0.0) {
    SingularProblem p;
    p.f = [=](double x, double t) { return gamma_c * t + theta * (x - x0); };
    p.f_x = [=](double, double) { return theta; };
    p.f_t = [=](double, double) { return gamma_c; };
    p.g = [](double, double) { return 1.0; };
    p.x0 = x0;
    return p;
}
} // namespace

TEST_CASE("initial_slope") {
    CHECK(initial_slope(linear(1.0, 0.5)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(initial_slope(linear(1.0, -1.0)) == doctest::Approx(0.5).epsilon(1e-15));

    SingularProblem sq = linear(0.0, 0.0);
    sq.f = [](double x, double) { return x * x; };
    sq.f_x = [](double x, double) { return 2 * x; };
    sq.f_t = [](double, double) { return 0.0; };
    CHECK(initial_slope(sq) == 0.0);

    SUBCASE("theta = 1 is degenerate") {
        CHECK_THROWS_AS(initial_slope(linear(1.0, 1.0)), Error);
    }
}

TEST_CASE("boundary_slope_limit") {
    CHECK(boundary_slope_limit(0.0, 0.3, -1.0) == 0.0);
    CHECK(boundary_slope_limit(2.0, -3.0, 1.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(boundary_slope_limit(1.0, 2.0, 2.0), Error);
}

TEST_CASE("solve on linear problems") {
    CHECK(solve(linear(1.0, 0.5), 1.0, 1e-10).endpoint() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(solve(linear(1.0, -1.0), 1.0, 1e-10).endpoint() == doctest::Approx(0.5).epsilon(1e-9));
    SUBCASE("nonzero x0") {
        Trajectory tr = solve(linear(2.0, -0.5, 1.5), 1.0, 1e-10);
        CHECK(tr.endpoint() == doctest::Approx(1.5 + 2.0 / 1.5).epsilon(1e-9));
        CHECK(tr.slope0 == doctest::Approx(2.0 / 1.5).epsilon(1e-14));
    }
}

TEST_CASE("C1 branch selection") {
    SUBCASE("f = alpha x keeps the flat branch") {
        Trajectory tr = solve(linear(0.0, 0.5), 1.0, 1e-10);
        for (double v : tr.values) CHECK(std::abs(v) <= 1e-10);
        Trajectory tr2 = solve_regularized(linear(0.0, 0.5), 1e-4, 1e-4, 1.0);
        for (double v : tr2.values) CHECK(std::abs(v) <= 1e-12);
    }
    SUBCASE("difference quotient at the smallest sample matches slope0") {
        double tol = 1e-9;
        Trajectory tr = solve(linear(1.0, 0.5), 1.0, tol);
        double dq = (tr.values[1] - tr.values[0]) / tr.times[1];
        CHECK(std::abs(dq - tr.slope0) <= 10 * tol);
    }
}

TEST_CASE("regularized eps-family") {
    SUBCASE("theta=0.5 follows the exact eps-family 2t - 2 sqrt(eps t)") {
        // The regularized trajectory leaves [0,eps] at 0, a 2 sqrt(eps t)
        // defect from the C1 branch that shrinks like sqrt(eps).
        double eps = 1e-4;
        Trajectory tr = solve_regularized(linear(1.0, 0.5), eps, 1e-4, 0.5);
        double worst = 0.0;
        for (size_t i = 0; i < tr.times.size(); ++i) {
            double t = tr.times[i];
            if (t < eps) continue;
            double family = 2.0 * t - 2.0 * std::sqrt(eps * t);
            worst = std::max(worst, std::abs(tr.values[i] - family));
        }
        CHECK(worst <= 5e-4);
    }
    SUBCASE("nonconstant g matches a high-accuracy reference") {
        SingularProblem p;
        p.f = [](double x, double t) { return t - x; };
        p.f_x = [](double, double) { return -1.0; };
        p.f_t = [](double, double) { return 1.0; };
        p.g = [](double, double t) { return 1.0 + t; };
        double ref = solve(p, 1.0, 1e-12).endpoint();
        double reg = solve_regularized(p, 1e-4, 1e-5, 1.0).endpoint();
        CHECK(std::abs(reg - ref) <= 1e-6);
    }
}

TEST_CASE("error paths") {
    SUBCASE("BlowUp") {
        SingularProblem p = linear(1e7, 0.5);
        CHECK_THROWS_AS(solve(p, 1.0, 1e-8), Error);
    }
    SUBCASE("DenominatorVanished when g changes sign") {
        SingularProblem p;
        p.f = [](double, double t) { return t; };
        p.f_x = [](double, double) { return 0.0; };
        p.f_t = [](double, double) { return 1.0; };
        p.g = [](double, double t) { return 1.0 - 3.0 * t; };
        try {
            solve(p, 1.0, 1e-8);
            FAIL("expected a throw");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DenominatorVanished);
        }
    }
    SUBCASE("theta -> 1 flagged rather than silently returned") {
        CHECK_THROWS_AS(solve(linear(1.0, 1.0 - 1e-9), 1.0, 1e-10), Error);
    }
}

TEST_CASE("continuation sweep over theta") {
    std::vector<double> grid;
    for (double th = -1.0; th <= 0.9 + 1e-12; th += 0.1) grid.push_back(th);
    auto family = [](double th) { return linear(1.0, th); };
    auto rows = continuation_sweep(family, grid, 1.0, 1e-9);
    REQUIRE(rows.size() == grid.size());
    double prev = 0.0;
    for (size_t i = 0; i < rows.size(); ++i) {
        REQUIRE(rows[i].ok);
        double expect = 1.0 / (1.0 - grid[i]);
        CHECK(rows[i].endpoint == doctest::Approx(expect).epsilon(1e-6));
        if (i) CHECK(rows[i].endpoint > prev); // smooth, increasing in theta
        prev = rows[i].endpoint;
    }
    SUBCASE("degenerate member is tagged, not silent") {
        std::vector<double> bad = {0.5, 1.0 - 1e-9};
        auto rows2 = continuation_sweep(family, bad, 1.0, 1e-10);
        CHECK(rows2[0].ok);
        CHECK_FALSE(rows2[1].ok);
        CHECK_FALSE(rows2[1].error.empty());
    }
}

TEST_CASE("trajectory CSV") {
    Trajectory tr = solve(linear(1.0, 0.5), 0.25, 1e-8);
    std::ostringstream os;
    tr.write_csv(os);
    CHECK(os.str().rfind("t,x\n0,", 0) == 0);
}

TEST_CASE("oracle suite is green") {
    for (const OracleResult& r : run_oracle_suite()) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
}
