#include "cnlse/classifier.hpp"

#include "cnlse/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace cnlse {

std::string to_string(CaseTag t) {
    switch (t) {
    case CaseTag::A:
        return "A";
    case CaseTag::B:
        return "B";
    case CaseTag::C:
        return "C";
    case CaseTag::D:
        return "D";
    case CaseTag::E:
        return "E";
    case CaseTag::None:
        return "none";
    }
    return "none";
}

namespace {

int sign(double x) {
    return (x > 0.0) - (x < 0.0);
}

} // namespace

ConstraintCase constraint_case(const CnlseParams& p, double rel_tol) {
    ConstraintCase c;
    c.tolerance = boundary_tolerance(p, rel_tol);
    c.discriminant = constraint_discriminant(p);
    c.sign_a = sign(p.a);
    c.sign_c1 = sign(p.c1);
    c.sign_c2 = std::abs(4.0 * p.a * p.c2) <= c.tolerance ? 0 : sign(p.c2);
    const bool d_zero = std::abs(c.discriminant) <= c.tolerance;

    if (p.a > 0.0 && p.c1 > 0.0 && c.sign_c2 == 0) {
        c.tag = CaseTag::B;
    } else if (p.a < 0.0 && p.c1 < 0.0 && d_zero) {
        c.tag = CaseTag::C;
    } else if (p.a < 0.0 && p.c1 < 0.0 && p.c2 > 0.0 && c.discriminant > 0.0) {
        c.tag = CaseTag::A;
    } else if (p.a > 0.0 && p.c2 > 0.0) {
        c.tag = CaseTag::D;
    } else if (p.a > 0.0 && p.c1 > 0.0 && p.c2 < 0.0 && (c.discriminant >= 0.0 || d_zero)) {
        c.tag = CaseTag::E;
    }
    return c;
}

std::string to_string(Boundedness b) {
    switch (b) {
    case Boundedness::Bounded:
        return "bounded";
    case Boundedness::Unbounded:
        return "unbounded";
    case Boundedness::Nonreal:
        return "nonreal";
    case Boundedness::BrightSolitary:
        return "bright_solitary";
    case Boundedness::DarkSolitary:
        return "dark_solitary";
    case Boundedness::IdenticallyZero:
        return "identically_zero";
    case Boundedness::Constant:
        return "constant";
    }
    return "bounded";
}

Boundedness coarse(Boundedness b) {
    switch (b) {
    case Boundedness::Unbounded:
    case Boundedness::Nonreal:
        return b;
    default:
        return Boundedness::Bounded;
    }
}

Boundedness BoundednessVerdict::of(FamilyTag family) const {
    switch (family) {
    case FamilyTag::G1:
    case FamilyTag::TanhDark:
        return g1;
    case FamilyTag::GPlus:
    case FamilyTag::SechBright:
        return g_plus;
    case FamilyTag::GMinus:
        return g_minus;
    default:
        throw DomainError("boundedness: " + to_string(family) + " is not a k = 0 g-family");
    }
}

BoundednessVerdict expected_boundedness(const ConstraintCase& c) {
    using B = Boundedness;
    switch (c.tag) {
    case CaseTag::A:
    case CaseTag::D:
        return {B::Bounded, B::Bounded, B::Unbounded};
    case CaseTag::E:
        return {B::Unbounded, B::Bounded, B::Bounded};
    case CaseTag::B:
        return {B::IdenticallyZero, B::BrightSolitary, B::IdenticallyZero};
    case CaseTag::C:
        return {B::DarkSolitary, B::Constant, B::Constant};
    case CaseTag::None:
        break;
    }
    throw UnclassifiedCase("parameters satisfy none of the constraint cases A-E");
}

Boundedness measured_boundedness(const NongenericG& g, int n_scan) {
    const SolutionCurve* curve = g.curve();
    const double scale = std::max(1.0, std::abs(g.params().c1 / g.params().a));
    if (g.identically_constant()) {
        const double y = g.g0();
        if (std::abs(y) <= 1e-12 * scale) {
            return Boundedness::IdenticallyZero;
        }
        return y < 0.0 ? Boundedness::Nonreal : Boundedness::Constant;
    }
    if (!curve) {
        // Closed degenerate forms.
        return g.family() == FamilyTag::SechBright ? Boundedness::BrightSolitary
                                                   : Boundedness::DarkSolitary;
    }

    const WeierstrassP& wp = curve->wp();
    const double pmin = wp.real_axis_min();
    for (const complex& v : curve->pole_wp_values()) {
        const double vs = std::max(1.0, std::abs(v));
        if (std::abs(v.imag()) <= 1e-12 * vs && v.real() >= pmin - 1e-12 * vs) {
            return Boundedness::Unbounded;
        }
    }

    const double L = wp.real_period();
    double window;
    if (std::isfinite(L)) {
        window = L;
    } else {
        // Solitary lattice: double root c, decay rate sqrt(3c).
        const EllipticInvariants inv = wp.invariants();
        const double c = inv.g2 != 0.0 ? -1.5 * inv.g3 / inv.g2 : 0.0;
        window = c > 0.0 ? 40.0 / std::sqrt(3.0 * c) : 40.0;
    }
    double gmin = infinity, gmax = -infinity;
    for (int i = 0; i < n_scan; ++i) {
        const double t = std::isfinite(L) ? window * (i + 0.5) / n_scan
                                          : -window + 2.0 * window * (i + 0.5) / n_scan;
        const double v = g(t);
        gmin = std::min(gmin, v);
        gmax = std::max(gmax, v);
    }
    if (gmin < -1e-9 * std::max(1.0, std::abs(gmax))) {
        return Boundedness::Nonreal;
    }
    if (!std::isfinite(L)) {
        const double g_inf = g(window);
        const double g_0 = g(0.0);
        if (std::abs(g_inf) <= 1e-8 * scale && g_0 > 0.0) {
            return Boundedness::BrightSolitary;
        }
        if (std::abs(g_0) <= 1e-8 * scale && g_inf > 0.0) {
            return Boundedness::DarkSolitary;
        }
    }
    return Boundedness::Bounded;
}

Boundedness measured_boundedness(const CnlseParams& p, FamilyTag family, int n_scan) {
    try {
        return measured_boundedness(NongenericG(p, family), n_scan);
    } catch (const ConstraintViolation&) {
        if ((family == FamilyTag::GPlus || family == FamilyTag::GMinus) &&
            constraint_discriminant(p) < 0.0) {
            return Boundedness::Nonreal;
        }
        throw;
    }
}

BoundednessVerdict measured_verdict(const CnlseParams& p, int n_scan) {
    BoundednessVerdict v;
    v.g1 = measured_boundedness(p, FamilyTag::G1, n_scan);
    v.g_plus = measured_boundedness(p, FamilyTag::GPlus, n_scan);
    v.g_minus = measured_boundedness(p, FamilyTag::GMinus, n_scan);
    return v;
}

ShiftMatch shift_equivalence(const CnlseParams& p, int n_t, int n_s) {
    const NongenericG gp(p, FamilyTag::GPlus);
    const NongenericG gm(p, FamilyTag::GMinus);
    const double L = gp.period();
    if (!std::isfinite(L)) {
        throw NotPeriodicFamily("shift_equivalence: the lattice has no finite real period");
    }
    std::vector<double> ts, ref;
    for (int i = 0; i < n_t; ++i) {
        ts.push_back(L * (i + 0.5) / n_t);
        ref.push_back(gp(ts.back()));
    }
    auto cost = [&](double s) {
        double worst = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            worst = std::max(worst, std::abs(ref[i] - gm(ts[i] + s)));
        }
        return worst;
    };
    ShiftMatch best;
    for (int j = 0; j < n_s; ++j) {
        const double s = L * j / n_s;
        const double c = cost(s);
        if (c < best.max_diff) {
            best = {s, c};
        }
    }
    const double step = L / n_s;
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::brent_find_minima(cost, best.shift - step, best.shift + step,
                                                         52, iters);
    if (r.second < best.max_diff) {
        best = {r.first, r.second};
    }
    best.shift = best.shift - L * std::floor(best.shift / L);
    return best;
}

} // namespace cnlse
