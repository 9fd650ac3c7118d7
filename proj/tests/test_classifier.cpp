#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cnlse/classifier.hpp"
#include "cnlse/errors.hpp"

#include <cmath>
#include <random>

using namespace cnlse;

namespace {

// Draw from the interior of a case region.
CnlseParams draw(CaseTag tag, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> mag(0.1, 2.0);
    std::uniform_real_distribution<double> frac(0.05, 0.95);
    std::uniform_real_distribution<double> any(-2.0, 2.0);
    switch (tag) {
    case CaseTag::A: {
        const double a = -mag(rng), c1 = -mag(rng);
        return {a, c1, frac(rng) * c1 * c1 / (-4.0 * a)};
    }
    case CaseTag::B:
        return {mag(rng), mag(rng), 0.0};
    case CaseTag::C: {
        const double a = -mag(rng), c1 = -mag(rng);
        return {a, c1, -c1 * c1 / (4.0 * a)};
    }
    case CaseTag::D:
        return {mag(rng), any(rng), mag(rng)};
    case CaseTag::E: {
        const double a = mag(rng), c1 = mag(rng);
        return {a, c1, -frac(rng) * c1 * c1 / (4.0 * a)};
    }
    default:
        return {-1.0, -2.0, -1.0};
    }
}

const CaseTag all_cases[] = {CaseTag::A, CaseTag::B, CaseTag::C, CaseTag::D, CaseTag::E};

} // namespace

TEST_CASE("case examples") {
    CHECK(constraint_case(CnlseParams(1.0, 1.0, 0.0)).tag == CaseTag::B);
    const auto a = constraint_case(CnlseParams(-0.125, -1.0, 1.0));
    CHECK(a.tag == CaseTag::A);
    CHECK(a.discriminant == doctest::Approx(0.5));
    CHECK(constraint_case(CnlseParams(-1.0, -2.0, -1.0)).tag == CaseTag::None);
    CHECK(constraint_case(CnlseParams(-1.0, -2.0, 1.0)).tag == CaseTag::C);
    CHECK(constraint_case(CnlseParams(2.0, -3.0, 1.0)).tag == CaseTag::D);
    CHECK(constraint_case(CnlseParams(1.0, 2.0, -0.5)).tag == CaseTag::E);
    // c1^2 + 4ac2 = 0 exactly on the E side counts as E's closed boundary.
    CHECK(constraint_case(CnlseParams(1.0, 2.0, -1.0)).tag == CaseTag::E);
    CHECK(constraint_case(CnlseParams(1.0, 2.0, -1.1)).tag == CaseTag::None);
    CHECK(constraint_case(CnlseParams(-1.0, 2.0, 0.5)).tag == CaseTag::None);
}

TEST_CASE("boundary ties go to the degenerate cases") {
    // c2 within tolerance of 0 with a, c1 > 0: B, not D or E.
    CHECK(constraint_case(CnlseParams(1.0, 1.0, 1e-12)).tag == CaseTag::B);
    CHECK(constraint_case(CnlseParams(1.0, 1.0, -1e-12)).tag == CaseTag::B);
    // c1^2 + 4ac2 within tolerance of 0 on the A side: C.
    const double c2 = 1.0 + 1e-12;
    CHECK(constraint_case(CnlseParams(-1.0, -2.0, c2)).tag == CaseTag::C);
    CHECK(constraint_case(CnlseParams(-1.0, -2.0, 0.999)).tag == CaseTag::A);
}

TEST_CASE("near-degenerate panel parameters") {
    const auto c = constraint_case(CnlseParams(-0.46, -1.92, 2.0));
    CHECK(c.tag == CaseTag::A);
    CHECK(c.discriminant == doctest::Approx(1.92 * 1.92 - 4.0 * 0.46 * 2.0));
    CHECK(std::abs(c.discriminant) < 0.01);
    CHECK(constraint_case(CnlseParams(0.46, -1.92, 2.0)).tag == CaseTag::D);
    CHECK(constraint_case(CnlseParams(-0.46, -1.92, 1.92 * 1.92 / (4.0 * 0.46))).tag == CaseTag::C);
}

TEST_CASE("expected boundedness table") {
    auto exp = [](CaseTag t) {
        ConstraintCase c;
        c.tag = t;
        return expected_boundedness(c);
    };
    CHECK(exp(CaseTag::A).g_minus == Boundedness::Unbounded);
    CHECK(exp(CaseTag::A).g1 == Boundedness::Bounded);
    CHECK(exp(CaseTag::A).g_plus == Boundedness::Bounded);
    CHECK(exp(CaseTag::D) == exp(CaseTag::A));
    CHECK(exp(CaseTag::E).g1 == Boundedness::Unbounded);
    CHECK(exp(CaseTag::E).g_plus == Boundedness::Bounded);
    CHECK(exp(CaseTag::E).g_minus == Boundedness::Bounded);
    CHECK(exp(CaseTag::B).g_plus == Boundedness::BrightSolitary);
    CHECK(exp(CaseTag::B).g1 == Boundedness::IdenticallyZero);
    CHECK(exp(CaseTag::C).g1 == Boundedness::DarkSolitary);
    CHECK(exp(CaseTag::C).g_plus == Boundedness::Constant);
    CHECK(exp(CaseTag::C).g_minus == Boundedness::Constant);
    CHECK_THROWS_AS(exp(CaseTag::None), UnclassifiedCase);
}

TEST_CASE("constant value in case C is c1/a") {
    const CnlseParams p(-0.5, -1.0, 0.5);
    REQUIRE(constraint_case(p).tag == CaseTag::C);
    for (auto fam : {FamilyTag::GPlus, FamilyTag::GMinus}) {
        NongenericG g(p, fam);
        CHECK(g.identically_constant());
        CHECK(g(1.3) == doctest::Approx(p.c1 / p.a));
    }
}

TEST_CASE("measured boundedness examples") {
    CHECK(measured_boundedness(CnlseParams(-0.125, -1.0, 1.0), FamilyTag::G1) == Boundedness::Bounded);
    CHECK(measured_boundedness(CnlseParams(-1.0, -2.0, -1.0), FamilyTag::G1) == Boundedness::Nonreal);
    const auto none = measured_verdict(CnlseParams(-1.0, -2.0, -1.0));
    CHECK(none.g_plus == Boundedness::Nonreal);
    // g0- = 2 + 2 sqrt 2 > 0 starts real but runs into a pole.
    CHECK(none.g_minus == Boundedness::Unbounded);
}

TEST_CASE("500 random draws per case: measured equals expected") {
    std::mt19937_64 rng(99);
    for (CaseTag tag : all_cases) {
        int mismatches = 0;
        for (int n = 0; n < 500; ++n) {
            const auto p = draw(tag, rng);
            const auto c = constraint_case(p);
            REQUIRE(c.tag == tag);
            const auto want = expected_boundedness(c);
            const auto got = measured_verdict(p, 256);
            if (!(got == want)) {
                ++mismatches;
                MESSAGE("case " << to_string(tag) << " a=" << p.a << " c1=" << p.c1 << " c2=" << p.c2
                                << ": g1 " << to_string(got.g1) << " g+ " << to_string(got.g_plus)
                                << " g- " << to_string(got.g_minus));
            }
        }
        CHECK_MESSAGE(mismatches == 0, "case " << to_string(tag));
    }
}

TEST_CASE("classification depends only on signs") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> s(-2.0, 2.0);
    std::uniform_real_distribution<double> scale(0.1, 10.0);
    int compared = 0;
    for (int n = 0; n < 2000; ++n) {
        const CnlseParams p(s(rng) + (s(rng) > 0 ? 0.01 : -0.01), s(rng), s(rng));
        CnlseParams q(p.a * scale(rng), p.c1 * scale(rng), p.c2 * scale(rng));
        const auto cp = constraint_case(p), cq = constraint_case(q);
        const double dp = cp.discriminant, dq = cq.discriminant;
        // Only rescalings that keep the sign of c1^2 + 4ac2 (away from 0).
        if (std::abs(dp) < 1e-6 || std::abs(dq) < 1e-6 || (dp > 0) != (dq > 0)) continue;
        CHECK(cp.tag == cq.tag);
        // A common positive factor on all three keeps every sign.
        const double l = scale(rng);
        CHECK(constraint_case(CnlseParams(p.a * l, p.c1 * l, p.c2 * l)).tag == cp.tag);
        ++compared;
    }
    CHECK(compared > 500);
}

TEST_CASE("cases B and C have degenerate lattices with g3 < 0") {
    std::mt19937_64 rng(23);
    for (CaseTag tag : {CaseTag::B, CaseTag::C}) {
        for (int n = 0; n < 100; ++n) {
            const auto p = draw(tag, rng);
            const auto inv = quartic_invariants(g_quartic_coefficients(p));
            CHECK(std::abs(discriminant(inv)) < 1e-12 * discriminant_scale(inv));
            CHECK(inv.g3 < 0.0);
        }
    }
}

TEST_CASE("case E: g+ and g- differ by a shift in t") {
    std::mt19937_64 rng(31);
    for (int n = 0; n < 10; ++n) {
        const auto p = draw(CaseTag::E, rng);
        const auto m = shift_equivalence(p);
        CHECK(m.max_diff < 1e-8);
        CHECK(m.shift > 0.0);
    }
}
