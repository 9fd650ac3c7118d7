#include "cnlse/audit.hpp"

#include "cnlse/errors.hpp"
#include "cnlse/nongeneric.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace cnlse {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double rel_diff(double ref, double other) {
    return std::abs(ref - other) / std::max(1.0, std::abs(ref));
}

AuditItem compare(std::string name, std::string kind, double ref, double printed, double tol,
                  std::string detail) {
    AuditItem it;
    it.name = std::move(name);
    it.kind = std::move(kind);
    it.reference = ref;
    it.printed = printed;
    it.magnitude = rel_diff(ref, printed);
    it.tolerance = tol;
    it.matches = std::isfinite(it.magnitude) && it.magnitude <= tol;
    it.detail = std::move(detail);
    return it;
}

AuditItem unavailable(std::string name, std::string kind, const std::string& why) {
    AuditItem it;
    it.name = std::move(name);
    it.kind = std::move(kind);
    it.reference = nan;
    it.printed = nan;
    it.magnitude = nan;
    it.matches = false;
    it.detail = "not evaluated: " + why;
    return it;
}

/// Max over xs of |curve(x) - alt(x)| / max(1, |curve(x)|), skipping poles.
template <class F>
AuditItem compare_curve(std::string name, const SolutionCurve& c, const std::vector<double>& xs,
                        F alt, double tol, std::string detail) {
    double worst = 0.0, ref = 0.0, other = 0.0;
    int used = 0;
    for (double x : xs) {
        if (c.pole_distance(x) < 0.05 || c.wp().real_lattice_distance(x) < 1e-3) {
            continue;
        }
        const double y = c(x);
        const double v = alt(x);
        const double d = rel_diff(y, v);
        if (!(d <= worst)) {
            worst = d;
            ref = y;
            other = v;
        }
        ++used;
    }
    AuditItem it;
    it.name = std::move(name);
    it.kind = "transcription";
    it.reference = ref;
    it.printed = other;
    it.magnitude = used > 0 ? worst : nan;
    it.tolerance = tol;
    it.matches = used > 0 && worst <= tol;
    it.detail = std::move(detail) + " (" + std::to_string(used) + " sample points)";
    return it;
}

std::vector<double> sample_points(double lo, double hi, int n) {
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) {
        xs.push_back(lo + (hi - lo) * (i + 0.5) / n);
    }
    return xs;
}

CnlseParams without_c3(const CnlseParams& p) {
    return CnlseParams(p.a, p.c1, p.c2, 0.0, p.c0);
}

} // namespace

const AuditItem* AuditReport::find(const std::string& name) const {
    for (const AuditItem& it : items) {
        if (it.name == name) {
            return &it;
        }
    }
    return nullptr;
}

double printed_h_formula(const QuarticCoefficients& R1, double h0, const WeierstrassP& wp,
                         double z) {
    const double al = R1.alpha, be = R1.beta, ga = R1.gamma, de = R1.delta;
    const double r = eval_R(R1, h0).r;
    const double root = std::sqrt(std::max(r, 0.0));
    const RealWpValue v = wp.real(z);
    const double num = 4.0 * v.wp * (h0 * v.wp + be * h0 * h0 + 2.0 * ga * h0 + de) +
                       2.0 * v.wp_prime * root + h0 * h0 * (2.0 * al * de - 2.0 * be * ga) +
                       h0 * (4.0 * be * de - 5.0 * ga * ga) - 2.0 * ga * de;
    const double base = 2.0 * v.wp - ga - 2.0 * be * h0 - al * h0 * h0;
    const double den = base * base - al / 2.0 * r;
    return num / den;
}

double printed_f_formula(const QuarticCoefficients& R2, double f0, const WeierstrassP& wp,
                         double t) {
    const double al = R2.alpha, ga = R2.gamma, de = R2.delta, ep = R2.epsilon;
    const double r = eval_R(R2, f0).r;
    const double root = std::sqrt(std::max(r, 0.0));
    const RealWpValue v = wp.real(t);
    const double num = -2.0 * ga * de - (5.0 * ga * ga - al * ep) * f0 + 2.0 * al * de * f0 * f0 +
                       4.0 * v.wp * (de + 2.0 * ga * f0 + v.wp * f0) + 2.0 * v.wp_prime * root;
    const double base = 2.0 * v.wp - ga - al * f0 * f0;
    return num / (base * base - al * r);
}

AuditReport consistency_audit(const CnlseParams& p, const AuditOptions& opts) {
    AuditReport rep;
    auto& items = rep.items;
    const double tol = opts.tolerance;
    const double a = p.a, c1 = p.c1, c2 = p.c2, c3 = p.c3;

    // Invariants of R1 (printed coefficients).
    const QuarticCoefficients R1 = r1_coefficients(p, Convention::Printed);
    const EllipticInvariants inv1 = quartic_invariants(R1);
    items.push_back(compare(
        "g2h", "invariant", inv1.g2, 3.0 * R1.gamma * R1.gamma - 4.0 * R1.beta * R1.gamma, tol,
        "standard 3g1^2 - 4b1d1 vs printed 3g1^2 - 4b1g1; difference 4 b1 (g1 - d1) = " +
            fmt(4.0 * R1.beta * (R1.gamma - R1.delta))));
    items.push_back(compare("g3h", "invariant", inv1.g3,
                            -std::pow(R1.gamma, 3) + 2.0 * R1.beta * R1.gamma * R1.delta -
                                R1.alpha * R1.delta * R1.delta,
                            tol, "standard vs printed -g1^3 + 2b1g1d1 - a1d1^2"));

    // Coefficient conventions.
    const QuarticCoefficients R1d = r1_coefficients(p, Convention::Derived);
    items.push_back(compare("gamma1", "convention", R1d.gamma, R1.gamma, tol,
                            "derived -(2c1^2 + 4ac2)/3 vs printed -(2c1^2 + 8ac2)/3; difference "
                            "4ac2/3 = " +
                                fmt(4.0 * a * c2 / 3.0)));

    // Invariants of R2 along h(z), both conventions.
    for (Convention conv : {Convention::Printed, Convention::Derived}) {
        const std::string tag = to_string(conv);
        try {
            const GenericSystem sys(p, opts.generic, conv, opts.z_ref);
            const CurveJet hj = sys.h_jet(opts.z_ref);
            const QuarticCoefficients R2 = r2_coefficients(p, hj.y, hj.dy, conv);
            const EllipticInvariants inv2 = quartic_invariants(R2);
            if (conv == Convention::Printed) {
                items.push_back(compare("g2t", "invariant", inv2.g2, c1 * c1 / 12.0 - a * c2, tol,
                                        "standard invariant of R2 at z_ref vs printed c1^2/12 - ac2"));
                items.push_back(compare(
                    "g3t", "invariant", inv2.g3,
                    a * c3 / 8.0 - c1 * (c1 * c1 + 36.0 * a * c2 * c2) / 216.0, tol,
                    "standard vs printed ac3/8 - c1(c1^2 + 36ac2^2)/216 (c2 squared)"));
                items.push_back(compare(
                    "g3t_linear", "invariant", inv2.g3,
                    a * c3 / 8.0 - c1 * (c1 * c1 + 36.0 * a * c2) / 216.0, tol,
                    "standard vs ac3/8 - c1(c1^2 + 36ac2)/216 (c2 linear)"));
                const QuarticCoefficients R2d =
                    r2_coefficients(p, hj.y, hj.dy, Convention::Derived);
                items.push_back(compare("epsilon2", "convention", R2d.epsilon, R2.epsilon, tol,
                                        "derived c2 - c1h + 3ah^2/2 vs printed 2c2 + 3ah^2/2 - "
                                        "c1h at h(z_ref) = " +
                                            fmt(hj.y)));

                // h(z) as printed vs the generic formula, at h0 = 0 and at a
                // probe h0 with R1(h0) > 0.
                const std::vector<double> zs =
                    sample_points(opts.z_range.lo, opts.z_range.hi, 12);
                {
                    const SolutionCurve hc(R1, 0.0, 1, CurveMode::Real);
                    items.push_back(compare_curve(
                        "h_transcription_h0_zero", hc, zs,
                        [&](double z) { return printed_h_formula(R1, 0.0, hc.wp(), z); }, 1e-9,
                        "printed h(z) vs generic formula, h0 = 0"));
                }
                double probe = nan, best = 0.0;
                for (int i = 1; i <= 200; ++i) {
                    const double h0 = 0.005 * i;
                    const double r = eval_R(R1, h0).r;
                    if (r > best) {
                        best = r;
                        probe = h0;
                    }
                }
                if (std::isfinite(probe)) {
                    const SolutionCurve hc(R1, probe, 1, CurveMode::Real);
                    items.push_back(compare_curve(
                        "h_transcription_probe", hc, zs,
                        [&](double z) { return printed_h_formula(R1, probe, hc.wp(), z); },
                        1e-9,
                        "printed h(z) vs generic formula at h0 = " + fmt(probe) +
                            " with R1(h0) = " + fmt(best) +
                            "; the printed denominator has -(a1/2)R1(h0) where the generic "
                            "formula has -a1 R1(h0)"));
                } else {
                    items.push_back(unavailable("h_transcription_probe", "transcription",
                                                "R1(h0) <= 0 for all h0 in (0, 1]"));
                }

                // f(t, z_ref) as printed vs the generic formula.
                const SolutionCurve fc = sys.f_curve(opts.z_ref);
                const double period = sys.wp_t().real_period();
                const double span = std::isfinite(period) ? period : 6.0;
                items.push_back(compare_curve(
                    "f_transcription", fc, sample_points(0.0, span, 16),
                    [&](double t) { return printed_f_formula(R2, fc.y0(), fc.wp(), t); }, 1e-9,
                    "printed f(t, z_ref) vs generic formula, f0 = " + fmt(fc.y0())));
            }

            // z-independence of the invariants of R2.
            double lo2 = infinity, hi2 = -infinity, lo3 = infinity, hi3 = -infinity;
            int used = 0;
            for (int i = 0; i < opts.n_z; ++i) {
                const double z = opts.z_range.lo +
                                 (opts.z_range.hi - opts.z_range.lo) * (i + 0.5) / opts.n_z;
                if (sys.h_curve().pole_distance(z) < 0.05) {
                    continue;
                }
                const CurveJet j = sys.h_jet(z);
                if (j.y < 0.0 || (j.y == 0.0 && j.dy != 0.0)) {
                    continue;
                }
                const EllipticInvariants g = quartic_invariants(r2_coefficients(p, j.y, j.dy, conv));
                lo2 = std::min(lo2, g.g2);
                hi2 = std::max(hi2, g.g2);
                lo3 = std::min(lo3, g.g3);
                hi3 = std::max(hi3, g.g3);
                ++used;
            }
            AuditItem it;
            it.name = "z_independence_" + tag;
            it.kind = "property";
            it.tolerance = opts.z_spread_tolerance;
            if (used >= 2) {
                const double s2 = (hi2 - lo2) / std::max({std::abs(hi2), std::abs(lo2), 1e-300});
                const double s3 = (hi3 - lo3) / std::max({std::abs(hi3), std::abs(lo3), 1e-300});
                it.reference = hi2;
                it.printed = hi3;
                it.magnitude = std::max(s2, s3);
                it.matches = it.magnitude < it.tolerance;
                it.detail = "relative spread of g2t (" + fmt(s2) + ") and g3t (" + fmt(s3) +
                            ") over " + std::to_string(used) + " z values";
            } else {
                it.magnitude = nan;
                it.detail = "not evaluated: fewer than 2 usable z values";
            }
            items.push_back(it);
        } catch (const Error& e) {
            items.push_back(unavailable("z_independence_" + tag, "property", e.what()));
        }
    }

    // Invariants of the k = 0 quartic.
    const CnlseParams p0 = without_c3(p);
    const EllipticInvariants invg = quartic_invariants(g_quartic_coefficients(p0));
    items.push_back(compare("g2g", "invariant", invg.g2, 4.0 / 3.0 * (c1 * c1 + 3.0 * a * c2), tol,
                            "standard vs printed (4/3)(c1^2 + 3ac2)"));
    items.push_back(compare("g3g", "invariant", invg.g3,
                            -4.0 / 27.0 * (2.0 * c1 * c1 * c1 + 9.0 * a * c1 * c2), tol,
                            "standard vs printed -(4/27)(2c1^3 + 9ac1c2)"));

    // Printed g forms vs the generic formula.
    for (FamilyTag fam : {FamilyTag::GPlus, FamilyTag::GMinus}) {
        const std::string tag = to_string(fam);
        try {
            const NongenericG g(p0, fam);
            if (!g.curve() || g.curve()->identically_constant()) {
                items.push_back(unavailable("g_printed_form_" + tag, "transcription",
                                            "g is constant for these parameters"));
                continue;
            }
            const double period = g.period();
            const double span = std::isfinite(period) ? period : 6.0;
            const std::vector<double> ts = sample_points(0.0, span, 16);
            items.push_back(compare_curve(
                "g_printed_form_" + tag, *g.curve(), ts,
                [&](double t) { return g.printed_weierstrass_form(t); }, 1e-9,
                "printed expanded form vs generic formula, g0 = " + fmt(g.g0())));
            AuditItem closed = compare_curve(
                "g_closed_form_" + tag, *g.curve(), ts,
                [&](double t) { return g.printed_closed_form(t); }, 1e-9,
                "printed closed form vs generic formula");
            const AuditItem flipped = compare_curve(
                "", *g.curve(), ts, [&](double t) { return -g.printed_closed_form(t); }, 1e-9, "");
            closed.detail += "; with the overall sign reversed the deviation is " +
                             fmt(flipped.magnitude);
            items.push_back(closed);
        } catch (const Error& e) {
            items.push_back(unavailable("g_printed_form_" + tag, "transcription", e.what()));
            items.push_back(unavailable("g_closed_form_" + tag, "transcription", e.what()));
        }
    }

    // Period of a k = 0 family.
    {
        AuditItem it;
        it.name = "period";
        it.kind = "property";
        it.tolerance = opts.period_tolerance;
        it.magnitude = nan;
        it.detail = "not evaluated: no k = 0 family with a finite period";
        for (FamilyTag fam : {FamilyTag::GPlus, FamilyTag::G1, FamilyTag::GMinus}) {
            try {
                const NongenericG g(p0, fam);
                const double L = g.period();
                if (!std::isfinite(L) || !g.curve() || g.curve()->identically_constant()) {
                    continue;
                }
                double worst = 0.0;
                int used = 0;
                for (double t : sample_points(0.0, L, 64)) {
                    if (g.singular_distance(t) < 0.05 || g.singular_distance(t + L) < 0.05) {
                        continue;
                    }
                    const double v = g(t);
                    worst = std::max(worst, std::abs(g(t + L) - v) / std::max(1.0, std::abs(v)));
                    ++used;
                }
                if (used == 0) {
                    continue;
                }
                it.reference = L;
                it.printed = L;
                it.magnitude = worst;
                it.matches = worst < it.tolerance;
                it.detail = "max |g(t + L) - g(t)| over one period for " + to_string(fam) +
                            ", L = " + fmt(L);
                break;
            } catch (const Error&) {
            }
        }
        items.push_back(it);
    }

    // Degenerate discriminant of the k = 0 lattice at cases B and C built from
    // the magnitudes of (a, c1).
    {
        const double am = std::abs(a);
        const double cm = c1 != 0.0 ? std::abs(c1) : 1.0;
        const CnlseParams pb(am, cm, 0.0);
        const CnlseParams pc(-am, -cm, -cm * cm / (4.0 * -am));
        for (const auto& [name, q] : {std::pair{"degenerate_B", pb}, std::pair{"degenerate_C", pc}}) {
            const EllipticInvariants g = quartic_invariants(g_quartic_coefficients(q));
            AuditItem it;
            it.name = name;
            it.kind = "property";
            it.reference = discriminant(g);
            it.printed = g.g3;
            it.magnitude = std::abs(discriminant(g)) / discriminant_scale(g);
            it.tolerance = 1e-12;
            it.matches = it.magnitude < it.tolerance && g.g3 < 0.0;
            it.detail = "|g2g^3 - 27g3g^2| / scale at (a, c1, c2) = (" + fmt(q.a) + ", " +
                        fmt(q.c1) + ", " + fmt(q.c2) + "), g3g = " + fmt(g.g3);
            items.push_back(it);
        }
    }

    // Compatibility conditions under both R1 conventions.
    {
        std::vector<double> zs;
        for (double z : sample_points(opts.z_range.lo, opts.z_range.hi, 30)) {
            zs.push_back(z);
        }
        rep.frobenius = frobenius_compare(p, opts.generic, zs, opts.frobenius_tolerance);
        if (rep.frobenius.passing.size() == 1) {
            rep.frobenius_convention = rep.frobenius.passing.front();
        }
        auto value = [](const ResidualReport& r, const std::string& n) {
            for (const CheckResult& c : r.checks) {
                if (c.name == n) {
                    return c.value;
                }
            }
            return nan;
        };
        AuditItem f;
        f.name = "compatibility_convention";
        f.kind = "property";
        f.reference = value(rep.frobenius.printed, "d_equation");
        f.printed = value(rep.frobenius.derived, "d_equation");
        f.magnitude = static_cast<double>(rep.frobenius.passing.size());
        f.tolerance = opts.frobenius_tolerance;
        f.matches = rep.frobenius_convention.has_value();
        std::string names;
        for (Convention c : rep.frobenius.passing) {
            names += (names.empty() ? "" : ", ") + to_string(c);
        }
        f.detail = "conventions passing: " + (names.empty() ? std::string("none") : names) +
                   "; d_equation max printed " + fmt(f.reference) + ", derived " + fmt(f.printed);
        items.push_back(f);

        const ResidualReport& ok =
            rep.frobenius_convention == Convention::Printed ? rep.frobenius.printed
                                                            : rep.frobenius.derived;
        AuditItem ph;
        ph.name = "phase_condition";
        ph.kind = "transcription";
        ph.reference = value(ok, "phase");
        ph.printed = value(ok, "phase_without_a");
        ph.magnitude = ph.printed;
        ph.tolerance = opts.frobenius_tolerance;
        ph.matches = ph.printed < ph.tolerance;
        ph.detail = "phi_zz + 4 d d_z (printed, no factor a) vs phi_zz + 4a d d_z = " +
                    fmt(ph.reference);
        items.push_back(ph);
    }
    return rep;
}

} // namespace cnlse
