#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cnlse/errors.hpp"
#include "cnlse/weierstrass.hpp"

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <random>

using namespace cnlse;

namespace {

double rel_err(complex got, complex want) {
    return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// P through Jacobi sn for three real roots e1 > e2 > e3.
double wp_jacobi(double x, double e1, double e2, double e3) {
    const double k = std::sqrt((e2 - e3) / (e1 - e3));
    const double sn = boost::math::jacobi_sn(k, std::sqrt(e1 - e3) * x);
    return e3 + (e1 - e3) / (sn * sn);
}

EllipticInvariants from_roots(double e1, double e2) {
    const double e3 = -e1 - e2;
    return {-4.0 * (e1 * e2 + e1 * e3 + e2 * e3), 4.0 * e1 * e2 * e3};
}

} // namespace

TEST_CASE("lemniscatic value at the real half period") {
    // g2 = 4, g3 = 0: roots 1, 0, -1 and P(omega) = 1.
    WeierstrassP wp({4.0, 0.0});
    CHECK(wp.roots().all_real);
    const double w = wp.real_half_period();
    CHECK(wp.real(w).wp == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(wp.real(w).wp_prime) < 1e-9);
    // omega = Gamma(1/4)^2 / (4 sqrt(2 pi)) for the lemniscatic lattice.
    const double expected = std::pow(std::tgamma(0.25), 2) / (4.0 * std::sqrt(2.0 * M_PI));
    CHECK(w == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("equianharmonic lattice has a complex root pair") {
    WeierstrassP wp({0.0, 4.0});
    CHECK_FALSE(wp.roots().all_real);
    CHECK(wp.roots().real_root() == doctest::Approx(1.0).epsilon(1e-12));
    const auto v = wp.real(wp.real_half_period());
    CHECK(v.wp == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("small-argument Laurent limit") {
    WeierstrassP wp({2.0, -1.0});
    for (double x : {1e-3, 1e-2, 0.05}) {
        const auto v = wp.real(x);
        const double series = 1.0 / (x * x) + 2.0 / 20.0 * x * x + -1.0 / 28.0 * std::pow(x, 4);
        CHECK(std::abs(v.wp - series) < 1e-8 * (1.0 / (x * x)));
    }
}

TEST_CASE("pole proximity is raised at lattice points") {
    WeierstrassP wp({4.0, 0.0});
    CHECK_THROWS_AS(wp(complex(0.0, 0.0)), PoleProximity);
    CHECK_THROWS_AS(wp(complex(2.0 * wp.real_half_period(), 0.0)), PoleProximity);
}

TEST_CASE("degenerate closed forms") {
    SUBCASE("hyperbolic: g2 = 12, g3 = -8, double root at 1") {
        const EllipticInvariants inv{12.0, -8.0};
        CHECK(is_degenerate(inv));
        WeierstrassP wp(inv);
        CHECK(wp.real_period() == infinity);
        for (double x : {0.1, 0.7, 2.3}) {
            // P = e + 3e / sinh^2(sqrt(3e) x) with e = 1.
            const double want = 1.0 + 3.0 / std::pow(std::sinh(std::sqrt(3.0) * x), 2);
            CHECK(wp.real(x).wp == doctest::Approx(want).epsilon(1e-12));
            CHECK(std::real(wp_degenerate(x, inv)) == doctest::Approx(want).epsilon(1e-12));
        }
    }
    SUBCASE("trigonometric: g2 = 12, g3 = 8, double root at -1") {
        const EllipticInvariants inv{12.0, 8.0};
        WeierstrassP wp(inv);
        for (double x : {0.1, 0.7, 1.3}) {
            const double want = -1.0 + 3.0 / std::pow(std::sin(std::sqrt(3.0) * x), 2);
            CHECK(wp.real(x).wp == doctest::Approx(want).epsilon(1e-11));
        }
        CHECK(wp.real_period() == doctest::Approx(M_PI / std::sqrt(3.0)).epsilon(1e-12));
    }
    SUBCASE("g2 = g3 = 0 gives 1/z^2") {
        WeierstrassP wp({0.0, 0.0});
        CHECK(wp.real(0.5).wp == doctest::Approx(4.0).epsilon(1e-14));
        CHECK(wp.real(0.5).wp_prime == doctest::Approx(-16.0).epsilon(1e-14));
    }
    CHECK_THROWS_AS(wp_degenerate(0.3, {4.0, 0.0}), NotDegenerate);
}

TEST_CASE("Jacobi oracle on random real lattices") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int n = 0; n < 200; ++n) {
        const double e3 = -u(rng);
        const double e2 = e3 + u(rng);
        const double e1 = -e2 - e3;
        if (!(e1 > e2 + 1e-3)) continue;
        const auto inv = from_roots(e1, e2);
        WeierstrassP wp(inv);
        const double w = wp.real_half_period();
        // omega = K(k) / sqrt(e1 - e3).
        const double k = std::sqrt((e2 - e3) / (e1 - e3));
        CHECK(w == doctest::Approx(boost::math::ellint_1(k) / std::sqrt(e1 - e3)).epsilon(1e-11));
        std::uniform_real_distribution<double> ux(0.02 * w, 1.98 * w);
        const double x = ux(rng);
        const double want = wp_jacobi(x, e1, e2, e3);
        CHECK(std::abs(wp.real(x).wp - want) / std::max(1.0, std::abs(want)) < 1e-9);
    }
}

TEST_CASE("half period by quadrature") {
    // omega = int_e1^inf ds / sqrt(4 s^3 - g2 s - g3).
    boost::math::quadrature::tanh_sinh<double> integrator;
    for (EllipticInvariants inv : {EllipticInvariants{4.0, 0.0}, EllipticInvariants{0.0, 4.0},
                                   EllipticInvariants{3.0, -1.5}, EllipticInvariants{-2.0, 5.0}}) {
        WeierstrassP wp(inv);
        const double e = wp.roots().real_root();
        auto f = [&](double s) {
            const double v = 4.0 * s * s * s - inv.g2 * s - inv.g3;
            return v > 0.0 ? 1.0 / std::sqrt(v) : 0.0;
        };
        const double w = integrator.integrate(
            [&](double s) { return f(s); }, e, std::numeric_limits<double>::infinity());
        CHECK(wp.real_half_period() == doctest::Approx(w).epsilon(1e-8));
    }
}

TEST_CASE("homogeneity: P(lz; l^-4 g2, l^-6 g3) = l^-2 P(z; g2, g3)") {
    const EllipticInvariants inv{3.0, -1.0};
    WeierstrassP base(inv);
    for (double l : {0.5, 2.0, 3.7}) {
        WeierstrassP scaled({inv.g2 / std::pow(l, 4), inv.g3 / std::pow(l, 6)});
        for (complex z : {complex(0.3, 0.1), complex(0.9, -0.4), complex(1.4, 0.2)}) {
            const complex want = base(z).wp / (l * l);
            CHECK(rel_err(scaled(l * z).wp, want) < 1e-11);
        }
    }
}

// Properties over 1000 random samples each: differential identity, parity,
// periodicity and the Laurent limit.
TEST_CASE("random-sample properties") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ug(-6.0, 6.0);
    std::uniform_real_distribution<double> uc(-1.0, 1.0);
    int n_identity = 0, n_parity = 0, n_period = 0, n_laurent = 0;
    while (n_identity < 1000) {
        const EllipticInvariants inv{ug(rng), ug(rng)};
        if (is_degenerate(inv, 1e-6)) continue;
        WeierstrassP wp(inv);
        const double s = wp.shortest_period();
        const complex z(uc(rng) * s, uc(rng) * s);
        if (std::abs(z - wp.nearest_lattice_point(z)) < 1e-2 * s) continue;
        const auto v = wp(z);
        const complex p = v.wp;
        const complex lhs = v.wp_prime * v.wp_prime;
        const complex rhs = 4.0 * p * p * p - inv.g2 * p - inv.g3;
        const double scale = std::abs(lhs) + 4.0 * std::norm(p) * std::abs(p) +
                             std::abs(inv.g2 * p) + std::abs(inv.g3);
        CHECK(std::abs(lhs - rhs) < 1e-10 * scale);
        ++n_identity;

        const auto m = wp(-z);
        CHECK(rel_err(m.wp, v.wp) < 1e-12);
        CHECK(rel_err(m.wp_prime, -v.wp_prime) < 1e-12);
        ++n_parity;

        for (complex g : wp.generators()) {
            const auto sh = wp(z + g);
            CHECK(rel_err(sh.wp, v.wp) < 1e-9);
            CHECK(rel_err(sh.wp_prime, v.wp_prime) < 1e-8);
        }
        ++n_period;

        const complex eps = z / std::abs(z) * (1e-3 * s);
        const double lim = std::abs(wp(eps).wp * eps * eps - 1.0);
        CHECK(lim < 1e-5 * (1.0 + std::abs(inv.g2) + std::abs(inv.g3)));
        ++n_laurent;
    }
    CHECK(n_parity == 1000);
    CHECK(n_period == 1000);
    CHECK(n_laurent == 1000);
}

TEST_CASE("reduced and unreduced evaluation agree inside the cell") {
    WeierstrassP wp({2.5, 0.7});
    for (double x : {0.2, 0.5, 0.9}) {
        CHECK(rel_err(wp(complex(x, 0.05)).wp, wp.unreduced(complex(x, 0.05)).wp) < 1e-10);
    }
}

TEST_CASE("inverse_real") {
    WeierstrassP wp({4.0, 0.0});
    for (double v : {1.0, 1.5, 10.0, 1e4}) {
        const double t = wp.inverse_real(v);
        CHECK(t > 0.0);
        CHECK(t <= wp.real_half_period() + 1e-12);
        CHECK(wp.real(t).wp == doctest::Approx(v).epsilon(1e-9));
    }
}

TEST_CASE("Carlson RF values") {
    // R_F(0, 1, 2) = 1.3110287771461
    CHECK(std::real(carlson_rf(0.0, 1.0, 2.0)) == doctest::Approx(1.3110287771461).epsilon(1e-12));
    // R_F(x, x, x) = x^{-1/2}
    CHECK(std::real(carlson_rf(4.0, 4.0, 4.0)) == doctest::Approx(0.5).epsilon(1e-14));
}
