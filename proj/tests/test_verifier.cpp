#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cnlse/errors.hpp"
#include "cnlse/nongeneric.hpp"
#include "cnlse/verifier.hpp"

#include <cmath>

using namespace cnlse;

namespace {

const CnlseParams text_params(-1.0, -2.0, 0.4, 0.03);

PsiPtr family_psi(const CnlseParams& p, FamilyTag tag) {
    SolutionFamily fam;
    fam.tag = tag;
    return assemble_psi(p, fam);
}

GridSpec small_grid() {
    GridSpec g;
    g.t = {-3.0, 3.0};
    g.z = {-1.0, 1.0};
    g.n_t = 21;
    g.n_z = 11;
    return g;
}

} // namespace

TEST_CASE("grid validation") {
    GridSpec g;
    CHECK_NOTHROW(g.validate());
    g.n_t = 8;
    CHECK_THROWS_AS(g.validate(), DomainError);
    g = {};
    g.t = {1.0, 1.0};
    CHECK_THROWS_AS(g.validate(), DomainError);
    g = {};
    g.pole_mask_radius = 0.0;
    CHECK_THROWS_AS(g.validate(), DomainError);
}

TEST_CASE("verdict rule") {
    CHECK(decide(1e-9, 0.0, 1e-6, 1e-4) == Verdict::Pass);
    CHECK(decide(1e-5, 0.0, 1e-6, 1e-4) == Verdict::Inconclusive);
    CHECK(decide(1e-3, 0.0, 1e-6, 1e-4) == Verdict::Fail);
    CHECK(decide(1e-9, 0.5, 1e-6, 1e-4) == Verdict::Inconclusive);
    CHECK(decide(1e-9, 0.0, 1e-6, 1e-4, true) == Verdict::Fail);
}

TEST_CASE("zero field and plane wave") {
    ComponentPsi zero("zero", [](double, double) { return 0.0; }, [](double) { return 0.0; },
                      [](double) { return 0.0; });
    for (auto scheme : {Scheme::Analytic, Scheme::FiniteDifference}) {
        const auto rep = cnlse_residual(zero, 1.0, small_grid(), scheme);
        CHECK(rep.max_abs == 0.0);
        CHECK(rep.passed());
    }
    // sqrt(2) e^{2iz} with a = 1: a |Psi|^2 = 2 = c1 (k_-^2 = 0 at c2 = -1).
    ConstantKPsi wave(CnlseParams(1.0, 2.0, -1.0));
    CHECK(std::abs(wave(0.4, 0.0) - std::sqrt(2.0)) < 1e-15);
    CHECK(cnlse_residual(wave, 1.0, small_grid(), Scheme::Analytic).max_abs < 1e-10);
    // The same field from bare components has no closed derivatives and goes
    // through finite differences.
    ComponentPsi bare("plane", [](double, double) { return std::sqrt(2.0); },
                      [](double) { return 0.0; }, [](double z) { return 2.0 * z; });
    CHECK(cnlse_residual(bare, 1.0, small_grid(), Scheme::Analytic).max_abs < 1e-8);
    ConstantKPsi ck(CnlseParams(1.0, 3.0, -1.0));
    CHECK(cnlse_residual(ck, 1.0, small_grid(), Scheme::Analytic).max_abs < 1e-10);
}

TEST_CASE("exact solutions pass every scheme") {
    const auto sech = family_psi(CnlseParams(1.0, 1.0, 0.0), FamilyTag::SechBright);
    const auto tanh = family_psi(CnlseParams(-1.0, -2.0, 1.0), FamilyTag::TanhDark);
    for (auto& [psi, a] : {std::pair{sech, 1.0}, std::pair{tanh, -1.0}}) {
        CHECK(cnlse_residual(*psi, a, small_grid(), Scheme::Analytic).max_abs < 1e-6);
        const auto fd = cnlse_residual(*psi, a, small_grid(), Scheme::FiniteDifference);
        CHECK(fd.max_abs < 1e-4);
        CHECK(fd.passed());
    }
}

TEST_CASE("a wrong nonlinearity is detected") {
    const auto sech = family_psi(CnlseParams(1.0, 1.0, 0.0), FamilyTag::SechBright);
    const auto rep = cnlse_residual(*sech, 1.1, small_grid(), Scheme::Analytic);
    CHECK(rep.max_abs > 0.1);
    CHECK(rep.verdict == Verdict::Fail);
}

TEST_CASE("finite-difference residual follows the stencil order") {
    const auto sech = family_psi(CnlseParams(1.0, 1.0, 0.0), FamilyTag::SechBright);
    auto run = [&](double h) {
        CnlseResidualOptions o;
        o.fd_step_t = h;
        o.fd_step_z = h;
        return cnlse_residual(*sech, 1.0, small_grid(), Scheme::FiniteDifference, o).max_abs;
    };
    const double r1 = run(0.1);
    const double r2 = run(0.05);
    const double ratio = r1 / r2;
    // Fourth-order stencils: 2^4 = 16, within 20%.
    CHECK(ratio > 16.0 * 0.8);
    CHECK(ratio < 16.0 * 1.2);
}

TEST_CASE("f0 roots") {
    SUBCASE("double roots of -(a/2)(f^2 - 1)^2") {
        // At h = 0, R2 = -(a/2) f^4 + c1 f^2 + c2 (derived); c1 = a, c2 = -a/2.
        const CnlseParams p(1.0, 1.0, -0.5);
        const auto roots = f0_roots(p, 0.0, 0.0, Convention::Derived);
        REQUIRE(roots.size() == 2);
        CHECK(roots[0].value == doctest::Approx(-1.0).epsilon(1e-7));
        CHECK(roots[1].value == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(roots[0].multiplicity == 2);
        CHECK(roots[1].multiplicity == 2);
    }
    SUBCASE("text parameters at z = 1: four real roots") {
        GenericSystem sys(text_params, {}, Convention::Printed);
        const auto roots = f0_roots(text_params, sys.h(1.0), sys.h_jet(1.0).dy, Convention::Printed);
        REQUIRE(roots.size() == 4);
        for (std::size_t i = 1; i < roots.size(); ++i) CHECK(roots[i - 1].value < roots[i].value);
        // The third root is the one nearest 0.87.
        double nearest = roots[0].value;
        for (const auto& r : roots)
            if (std::abs(r.value - 0.87) < std::abs(nearest - 0.87)) nearest = r.value;
        CHECK(nearest == roots[2].value);
        CHECK(sys.f0(1.0) == doctest::Approx(roots[2].value));
    }
}

TEST_CASE("f_z delta is stable under step halving") {
    GenericSystem sys(text_params, {}, Convention::Printed);
    for (double t : {0.3, 1.1}) {
        const auto d1 = fz_delta(sys, t, 1.0, 1e-4);
        const auto d2 = fz_delta(sys, t, 1.0, 5e-5);
        CHECK(std::abs(d1.delta - d2.delta) < 10.0 * std::max(d1.noise, d2.noise) + 1e-9);
        CHECK(std::abs(d1.curve_residual) < 1e-6);
    }
}

TEST_CASE("counterexample harness on the text configuration") {
    GenericSystem sys(text_params, {}, Convention::Printed);
    const auto run = counterexample_run(sys);
    CHECK(run.samples.size() == 201);
    CHECK(run.max_curve_residual < 1e-6);
    CHECK(run.report.masked_fraction() < 0.5);
    CHECK(std::isfinite(run.max_delta));
    CHECK(run.f0_star == doctest::Approx(sys.f0(1.0)));
    CHECK(run.reproduced == (run.max_delta > 1e3 * std::max(run.max_curve_residual, run.noise_floor)));

    SUBCASE("verdict is invariant to t-grid refinement beyond 201 points") {
        CounterexampleOptions o;
        o.n_t = 401;
        const auto finer = counterexample_run(sys, o);
        CHECK(finer.reproduced == run.reproduced);
        CHECK(finer.report.verdict == run.report.verdict);
    }
}

TEST_CASE("counterexample harness detects an inconsistent f0") {
    // f0 between two roots of R2 at z = 1 is not a turning point, so f changes
    // with z in a way the f_z relation does not allow.
    GenericConfig cfg;
    cfg.f0 = {F0Rule::Kind::Explicit, 0.008217};
    GenericSystem sys(text_params, cfg, Convention::Printed);
    const auto run = counterexample_run(sys);
    CHECK(run.max_curve_residual < 1e-6);
    CHECK(run.reproduced);
    CHECK(run.max_delta > 1e3 * std::max(run.max_curve_residual, run.noise_floor));
}

TEST_CASE("nongeneric solution through the same harness is consistent") {
    // c3 = 0 and h0 = 0 keep h identically zero, so f does not depend on z.
    const CnlseParams p(-1.0, -2.0, 0.4, 0.0);
    GenericSystem sys(p, {}, Convention::Printed);
    CHECK(sys.h(0.7) == 0.0);
    for (double t : {0.2, 0.9}) CHECK(std::abs(fz_delta(sys, t, 1.0).delta) < 1e-9);
    const auto run = counterexample_run(sys);
    CHECK_FALSE(run.reproduced);
}

TEST_CASE("compatibility conditions") {
    std::vector<double> zs;
    for (int i = 0; i < 37; ++i) zs.push_back(0.2 + 0.05 * i);
    SUBCASE("constant h kills the phase and b equations") {
        const CnlseParams p(1.0, 2.0, -0.5);
        const double k2 = 0.7;
        const auto r = frobenius_residuals(p, [&](double) { return k2; }, 0.5);
        // Zero up to the rounding of the difference quotients.
        CHECK(std::abs(r.phase) < 1e-12);
        CHECK(std::abs(r.amplitude_b) < 1e-12);
    }
    SUBCASE("the derived R1 satisfies them, the printed one does not") {
        const auto cmp = frobenius_compare(text_params, {}, zs);
        CHECK(cmp.derived.passed());
        CHECK(cmp.derived.max_abs < 1e-5);
        CHECK_FALSE(cmp.printed.passed());
        REQUIRE(cmp.passing.size() == 1);
        CHECK(cmp.passing[0] == Convention::Derived);
    }
}
