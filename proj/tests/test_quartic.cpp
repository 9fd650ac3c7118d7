#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cnlse/errors.hpp"
#include "cnlse/quartic.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <random>

using namespace cnlse;

namespace {

QuarticCoefficients random_quartic(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {u(rng), u(rng), u(rng), u(rng), u(rng)};
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1);
    return xs;
}

// y'' = R'(y)/2 from y(0) = y0, y'(0) = -s sqrt(R(y0)) by adaptive RK.
double ode_oracle(const QuarticCoefficients& R, double y0, int s, double x) {
    using State = std::array<double, 2>;
    namespace odeint = boost::numeric::odeint;
    State st{y0, -s * std::sqrt(eval_R(R, y0).r)};
    auto rhs = [&](const State& q, State& dq, double) {
        dq[0] = q[1];
        dq[1] = eval_R(R, q[0]).r1 / 2.0;
    };
    auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
    odeint::integrate_adaptive(stepper, rhs, st, 0.0, x, x / 64.0);
    return st[0];
}

} // namespace

TEST_CASE("eval_R and its derivatives") {
    const QuarticCoefficients R{1.0, 0.5, -1.0 / 3.0, 0.25, 2.0};
    const auto j = eval_R(R, 2.0);
    // 16 + 16 - 8 + 2 + 2
    CHECK(j.r == doctest::Approx(28.0));
    // 32 + 24 - 8 + 1
    CHECK(j.r1 == doctest::Approx(49.0));
    CHECK(j.r2 == doctest::Approx(48.0 + 24.0 - 4.0));
    CHECK(j.r3 == doctest::Approx(60.0));
    CHECK(j.r4 == doctest::Approx(24.0));
}

TEST_CASE("invariants are unchanged by translation") {
    std::mt19937_64 rng(3);
    for (int n = 0; n < 50; ++n) {
        const auto R = random_quartic(rng);
        const auto a = quartic_invariants(R);
        const auto b = quartic_invariants(translate(R, 0.7));
        CHECK(b.g2 == doctest::Approx(a.g2).epsilon(1e-12).scale(1.0));
        CHECK(b.g3 == doctest::Approx(a.g3).epsilon(1e-12).scale(1.0));
        CHECK(eval_R(translate(R, 0.7), 0.3).r == doctest::Approx(eval_R(R, 1.0).r));
    }
}

TEST_CASE("sech^2 from R = 4y^2 - 4y^3") {
    const QuarticCoefficients R{0.0, -1.0, 2.0 / 3.0, 0.0, 0.0};
    const auto curve = weierstrass_solution(R, 1.0);
    for (double x : {-2.5, -0.4, 0.0, 0.3, 1.7, 4.0}) {
        const double want = 1.0 / std::pow(std::cosh(x), 2);
        CHECK(curve(x) == doctest::Approx(want).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("negative radicand is rejected in real mode only") {
    const QuarticCoefficients R{0.0, 0.0, 1.0 / 6.0, 0.0, -1.0}; // y^2 - 1
    CHECK_THROWS_AS(weierstrass_solution(R, 0.5), NegativeRadicand);
    const auto c = weierstrass_solution(R, 0.5, 1, CurveMode::Complex);
    CHECK(c.negative_radicand());
}

TEST_CASE("identically constant at a double root") {
    // (y - 1)^2 (y + 2)^2 has double roots at 1 and -2.
    const QuarticCoefficients R{1.0, 0.5, -0.5, -1.0, 4.0};
    const auto c = weierstrass_solution(R, 1.0);
    CHECK(c.identically_constant());
    CHECK(c(0.8) == 1.0);
}

TEST_CASE("50 random quartics: ODE residual, both branches, oracle and pole limit") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uy(-1.0, 1.0);
    int done = 0;
    while (done < 50) {
        const auto R = random_quartic(rng);
        const double y0 = uy(rng);
        if (eval_R(R, y0).r <= 1e-3) continue;
        for (int s : {1, -1}) {
            const auto curve = weierstrass_solution(R, y0, s);
            const auto rep = ode_residual(curve, linspace(-1.5, 1.5, 121));
            CHECK(rep.max_abs < 1e-6);
            CHECK(rep.masked_fraction() < 0.5);
            CHECK(std::abs(curve(0.0) - y0) < 1e-8);
            // Approach to the lattice point of P from the formula side.
            CHECK(std::abs(curve(1e-5) - y0) < 1e-8 + 1e-5 * (std::sqrt(eval_R(R, y0).r) + 1.0));
            const double jet_slope = curve.jet(0.0).dy;
            CHECK(jet_slope == doctest::Approx(-s * std::sqrt(eval_R(R, y0).r)).epsilon(1e-8));

            // Independent integrator, up to the first pole.
            const double reach = std::min(1.0, 0.5 * curve.pole_distance(0.0));
            for (double x : {0.5 * reach, -reach}) {
                const double want = ode_oracle(R, y0, s, x);
                CHECK(std::abs(curve(x) - want) < 1e-7 * std::max(1.0, std::abs(want)));
            }
        }
        ++done;
    }
}

TEST_CASE("jet agrees with finite differences") {
    const QuarticCoefficients R{-0.3, 0.2, 0.4, -0.1, 0.9};
    const auto curve = weierstrass_solution(R, 0.2);
    for (double x : {-0.7, 0.35, 1.1}) {
        const auto j = curve.jet(x);
        const auto y = [&](double s) { return curve(s); };
        const auto dy = [&](double s) { return curve.jet(s).dy; };
        CHECK(j.y == doctest::Approx(curve(x)));
        CHECK(j.dy == doctest::Approx(central_derivative(y, x, 1e-3)).epsilon(1e-9));
        CHECK(j.d2y == doctest::Approx(central_derivative(dy, x, 1e-3)).epsilon(1e-8));
        CHECK(j.d2y == doctest::Approx(eval_R(R, j.y).r1 / 2.0).epsilon(1e-9));
    }
}

TEST_CASE("poles of the curve are found on the real axis") {
    // (y')^2 = y^4 + 1 blows up in finite x.
    const QuarticCoefficients R{1.0, 0.0, 0.0, 0.0, 1.0};
    const auto curve = weierstrass_solution(R, 0.0, -1);
    const double d = curve.pole_distance(0.0);
    REQUIRE(std::isfinite(d));
    const double x = d - 1e-4;
    CHECK(std::abs(curve(x)) > 1e3);
    // int_0^inf dy / sqrt(1 + y^4) = Gamma(1/4)^2 / (4 sqrt(pi))
    CHECK(d == doctest::Approx(std::pow(std::tgamma(0.25), 2) / (4.0 * std::sqrt(M_PI))).epsilon(1e-9));
}
