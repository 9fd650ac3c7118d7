#include "cnlse/nongeneric.hpp"

#include "cnlse/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace cnlse {

QuarticCoefficients g_quartic_coefficients(const CnlseParams& p, double k) {
    const double c = p.c1 - p.a * k * k;
    return {0.0, -p.a / 2.0, 2.0 * c / 3.0, 2.0 * p.c2, 0.0};
}

double constraint_discriminant(const CnlseParams& p) {
    return p.c1 * p.c1 + 4.0 * p.a * p.c2;
}

double boundary_tolerance(const CnlseParams& p, double rel_tol) {
    return rel_tol * std::max(p.c1 * p.c1, std::abs(4.0 * p.a * p.c2));
}

std::array<double, 2> g0_plus_minus(const CnlseParams& p) {
    const double disc = constraint_discriminant(p);
    if (disc < -boundary_tolerance(p)) {
        throw ConstraintViolation("g0+- require c1^2 + 4 a c2 >= 0");
    }
    const double s = std::abs(disc) <= boundary_tolerance(p) ? 0.0 : std::sqrt(disc);
    // The root with |c1 + sign(c1) s| is free of cancellation; the other one
    // follows from g0+ g0- = -4 c2 / a.
    const double big = (p.c1 + std::copysign(s, p.c1)) / p.a;
    const double small = big != 0.0 ? -4.0 * p.c2 / (p.a * big) : 0.0;
    return p.c1 >= 0.0 ? std::array<double, 2>{big, small} : std::array<double, 2>{small, big};
}

NongenericG::NongenericG(CnlseParams p, FamilyTag family, double pole_exclusion)
    : p_(p), family_(family) {
    if (!is_g_family(family)) {
        throw DomainError("NongenericG: " + to_string(family) + " is not a k = 0 g-family");
    }
    if (p.c3 != 0.0) {
        throw ConstraintViolation("nongeneric families require c3 = 0");
    }
    const QuarticCoefficients R = g_quartic_coefficients(p);
    inv_ = quartic_invariants(R);
    wp_ = std::make_shared<const WeierstrassP>(inv_, pole_exclusion);
    const double tol = boundary_tolerance(p);
    switch (family) {
    case FamilyTag::G1:
        g0_ = 0.0;
        break;
    case FamilyTag::GPlus:
        g0_ = g0_plus_minus(p)[0];
        break;
    case FamilyTag::GMinus:
        g0_ = g0_plus_minus(p)[1];
        break;
    case FamilyTag::SechBright:
        if (!(p.a > 0.0 && p.c1 > 0.0 && std::abs(4.0 * p.a * p.c2) <= tol)) {
            throw ConstraintViolation("sech family requires a > 0, c1 > 0, c2 = 0");
        }
        g0_ = 2.0 * p.c1 / p.a;
        break;
    case FamilyTag::TanhDark:
        if (!(p.a < 0.0 && p.c1 < 0.0 && std::abs(constraint_discriminant(p)) <= tol)) {
            throw ConstraintViolation("tanh family requires a < 0, c1 < 0, c1^2 + 4 a c2 = 0");
        }
        g0_ = 0.0;
        break;
    default:
        break;
    }

    if (family == FamilyTag::SechBright) {
        zeros_ = AmplitudeZeros::None;
        return;
    }
    if (family == FamilyTag::TanhDark) {
        zeros_ = AmplitudeZeros::AtOrigin;
        return;
    }
    // Ties at the boundaries make g constant: g+- = c1/a is a double root of R
    // when c1^2 + 4ac2 = 0, and g1 = 0 is one when c2 = 0.
    const bool tie = family == FamilyTag::G1 ? std::abs(4.0 * p.a * p.c2) <= tol
                                             : std::abs(constraint_discriminant(p)) <= tol;
    if (tie) {
        constant_ = true;
        zeros_ = AmplitudeZeros::None;
        return;
    }
    curve_.emplace(R, g0_, 1, CurveMode::Real, wp_);
    constant_ = curve_->identically_constant();
    if (constant_) {
        zeros_ = AmplitudeZeros::None;
    } else if (g0_ == 0.0) {
        zeros_ = std::isfinite(period()) ? AmplitudeZeros::AtLattice : AmplitudeZeros::AtOrigin;
    } else if (std::isfinite(period())) {
        try {
            const double half = (*curve_)(period() / 2.0);
            if (std::abs(half) <= 1e-9 * std::max(1.0, std::abs(g0_))) {
                zeros_ = AmplitudeZeros::AtHalfPeriod;
            }
        } catch (const Error&) {
            zeros_ = AmplitudeZeros::None;
        }
    }
}

double NongenericG::period() const {
    return wp_->real_period();
}

double NongenericG::operator()(double t) const {
    if (family_ == FamilyTag::SechBright) {
        const double s = 1.0 / std::cosh(t * std::sqrt(p_.c1));
        return 2.0 * p_.c1 / p_.a * s * s;
    }
    if (family_ == FamilyTag::TanhDark) {
        const double th = std::tanh(t * std::sqrt(-p_.c1 / 2.0));
        return p_.c1 / p_.a * th * th;
    }
    if (constant_) {
        return g0_;
    }
    return (*curve_)(t);
}

CurveJet NongenericG::jet(double t) const {
    if (family_ == FamilyTag::SechBright) {
        const double k = std::sqrt(p_.c1);
        const double amp = 2.0 * p_.c1 / p_.a;
        const double th = std::tanh(k * t);
        const double s = 1.0 - th * th;
        return {amp * s, -2.0 * amp * k * s * th, amp * k * k * (4.0 * s * th * th - 2.0 * s * s)};
    }
    if (family_ == FamilyTag::TanhDark) {
        const double k = std::sqrt(-p_.c1 / 2.0);
        const double amp = p_.c1 / p_.a;
        const double th = std::tanh(k * t);
        const double s = 1.0 - th * th;
        return {amp * th * th, 2.0 * amp * k * th * s, amp * k * k * (2.0 * s * s - 4.0 * th * th * s)};
    }
    if (constant_) {
        return {g0_, 0.0, 0.0};
    }
    return curve_->jet(t);
}

double NongenericG::singular_distance(double t) const {
    return curve_ ? curve_->pole_distance(t) : infinity;
}

double NongenericG::amplitude_sign(double t) const {
    using std::numbers::pi;
    switch (zeros_) {
    case AmplitudeZeros::None:
        return 1.0;
    case AmplitudeZeros::AtOrigin:
        return t < 0.0 ? -1.0 : 1.0;
    case AmplitudeZeros::AtLattice:
        return std::sin(pi * t / period()) < 0.0 ? -1.0 : 1.0;
    case AmplitudeZeros::AtHalfPeriod:
        return std::cos(pi * t / period()) < 0.0 ? -1.0 : 1.0;
    }
    return 1.0;
}

double NongenericG::printed_closed_form(double t) const {
    if (family_ != FamilyTag::GPlus && family_ != FamilyTag::GMinus) {
        throw DomainError("printed closed form applies to g+ and g- only");
    }
    const double s = std::sqrt(std::max(0.0, constraint_discriminant(p_)));
    const double pm = family_ == FamilyTag::GPlus ? 1.0 : -1.0;
    const double P = wp_->real(t).wp;
    const double den = 6.0 * P + p_.c1 + pm * 3.0 * s;
    return 4.0 * g0_ * (2.0 * p_.c1 * p_.c1 + 9.0 * p_.a * p_.c2 - 3.0 * P * (p_.c1 + 3.0 * P)) /
           (den * den);
}

double NongenericG::printed_weierstrass_form(double t) const {
    const double a = p_.a, c = p_.c1, c2 = p_.c2, g0 = g0_;
    const RealWpValue v = wp_->real(t);
    double rad = -2.0 * a * g0 * g0 * g0 + 4.0 * c * g0 * g0 + 8.0 * c2 * g0;
    if (std::abs(rad) <= 64.0 * std::numeric_limits<double>::epsilon() *
                             as_polynomial(g_quartic_coefficients(p_)).magnitude(g0)) {
        rad = 0.0;
    }
    rad = std::max(0.0, rad);
    const double den = 6.0 * v.wp + 3.0 * a * g0 - 2.0 * c;
    const double t1 = 6.0 * v.wp * (-3.0 * a * g0 * g0 + 4.0 * c * g0 + 4.0 * c2) +
                      6.0 * v.wp_prime * std::sqrt(rad);
    const double t2 = -3.0 * a * a * g0 * g0 * g0 + 6.0 * a * c * g0 * g0 +
                      (-12.0 * a * c2 - 8.0 * c * c) * g0 + 8.0 * c2 * (-c);
    return g0 + 3.0 * t1 / (den * den) + 3.0 * t2 / (den * den);
}

NongenericPsi::NongenericPsi(NongenericG g, Amplitude amplitude)
    : g_(std::move(g)), amplitude_(amplitude) {}

namespace {

double amplitude_scale(const CnlseParams& p) {
    return std::max(1.0, std::abs(p.c1 / p.a));
}

} // namespace

double NongenericPsi::f(double t, double) const {
    double g = g_(t);
    if (g < 0.0 && g > -1e-13 * amplitude_scale(g_.params())) {
        g = 0.0;
    }
    // g < 0 (a nonreal family) propagates as NaN.
    const double root = std::sqrt(g);
    return amplitude_ == Amplitude::Signed ? g_.amplitude_sign(t) * root : root;
}

double NongenericPsi::phi(double z) const {
    return g_.params().c1 * z + g_.params().c0;
}

std::optional<PsiJet> NongenericPsi::jet(double t, double z) const {
    const CurveJet j = g_.jet(t);
    if (!(j.y > 1e-8 * amplitude_scale(g_.params()))) {
        return std::nullopt;
    }
    const double sigma = amplitude_ == Amplitude::Signed ? g_.amplitude_sign(t) : 1.0;
    const double r = std::sqrt(j.y);
    const double f = sigma * r;
    const double ft = sigma * j.dy / (2.0 * r);
    const double ftt = sigma * (j.d2y / (2.0 * r) - j.dy * j.dy / (4.0 * j.y * r));
    const complex e = std::polar(1.0, phi(z));
    PsiJet out;
    out.psi = f * e;
    out.psi_t = ft * e;
    out.psi_tt = ftt * e;
    out.psi_z = complex(0.0, g_.params().c1) * out.psi;
    return out;
}

ConstantKPsi::ConstantKPsi(CnlseParams p) : p_(p), sol_(gconst_solution(p)) {}

std::optional<PsiJet> ConstantKPsi::jet(double, double z) const {
    PsiJet out;
    out.psi = complex(std::sqrt(sol_.g), sol_.k) * std::polar(1.0, phi(z));
    out.psi_t = 0.0;
    out.psi_tt = 0.0;
    out.psi_z = complex(0.0, p_.c1) * out.psi;
    return out;
}

GenericPsi::GenericPsi(std::shared_ptr<const GenericSystem> sys) : sys_(std::move(sys)) {}

double GenericPsi::d(double z) const {
    const double h = sys_->h(z);
    if (h < 0.0) {
        throw DomainError("generic family: h(z) < 0");
    }
    return std::sqrt(h);
}

} // namespace cnlse
