#include "cnlse/quartic.hpp"

#include "cnlse/errors.hpp"

#include <algorithm>
#include <cmath>

namespace cnlse {

QuarticJet eval_R(const QuarticCoefficients& R, double y) {
    const double a = R.alpha, b = R.beta, c = R.gamma, d = R.delta, e = R.epsilon;
    QuarticJet j;
    j.r = (((a * y + 4.0 * b) * y + 6.0 * c) * y + 4.0 * d) * y + e;
    j.r1 = ((4.0 * a * y + 12.0 * b) * y + 12.0 * c) * y + 4.0 * d;
    j.r2 = (12.0 * a * y + 24.0 * b) * y + 12.0 * c;
    j.r3 = 24.0 * a * y + 24.0 * b;
    j.r4 = 24.0 * a;
    return j;
}

EllipticInvariants quartic_invariants(const QuarticCoefficients& R) {
    const double a = R.alpha, b = R.beta, c = R.gamma, d = R.delta, e = R.epsilon;
    return {a * e - 4.0 * b * d + 3.0 * c * c,
            a * c * e + 2.0 * b * c * d - a * d * d - b * b * e - c * c * c};
}

Polynomial as_polynomial(const QuarticCoefficients& R) {
    return Polynomial({R.epsilon, 4.0 * R.delta, 6.0 * R.gamma, 4.0 * R.beta, R.alpha});
}

QuarticCoefficients translate(const QuarticCoefficients& R, double s) {
    const QuarticJet j = eval_R(R, s);
    return {j.r4 / 24.0, j.r3 / 24.0, j.r2 / 12.0, j.r1 / 4.0, j.r};
}

namespace {

double quartic_scale(const QuarticCoefficients& R, double y) {
    return as_polynomial(R).magnitude(y);
}

} // namespace

SolutionCurve::SolutionCurve(QuarticCoefficients R, double y0, int branch_sign, CurveMode mode,
                             double pole_exclusion)
    : SolutionCurve(R, y0, branch_sign, mode,
                    std::make_shared<const WeierstrassP>(quartic_invariants(R), pole_exclusion)) {}

SolutionCurve::SolutionCurve(QuarticCoefficients R, double y0, int branch_sign, CurveMode mode,
                             std::shared_ptr<const WeierstrassP> wp)
    : R_(R), y0_(y0), sign_(branch_sign >= 0 ? 1 : -1), mode_(mode), wp_(std::move(wp)) {
    init();
}

void SolutionCurve::init() {
    j0_ = eval_R(R_, y0_);
    const double scale = quartic_scale(R_, y0_);
    const double rounding = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    // y0 at a root of R up to rounding: treat it as exact.
    if (std::abs(j0_.r) <= rounding) {
        j0_.r = 0.0;
    }
    negative_ = j0_.r < 0.0;
    if (negative_ && mode_ == CurveMode::Real) {
        throw NegativeRadicand("R(y0) < 0: no real curve through y0");
    }
    sqrt_r_ = std::sqrt(complex(j0_.r));
    const double scale1 = as_polynomial(R_).derivative().magnitude(y0_);
    constant_ = j0_.r == 0.0 &&
                std::abs(j0_.r1) <= 64.0 * std::numeric_limits<double>::epsilon() * scale1;
    taylor_radius_ = 2.0 * wp_->pole_exclusion();
}

bool SolutionCurve::near_lattice(complex x, complex& offset) const {
    const complex lattice = wp_->nearest_lattice_point(x);
    offset = x - lattice;
    return std::abs(offset) < taylor_radius_;
}

complex SolutionCurve::taylor(complex u) const {
    const QuarticJet& j = j0_;
    const complex s1 = -static_cast<double>(sign_) * sqrt_r_;
    const complex c4 = (j.r3 * j.r + j.r2 * j.r1 / 2.0) / 48.0;
    return y0_ + u * (s1 + u * (j.r1 / 4.0 + u * (j.r2 * s1 / 12.0 + u * c4)));
}

CurveJet SolutionCurve::taylor_jet(double u) const {
    const QuarticJet& j = j0_;
    const double s1 = -static_cast<double>(sign_) * sqrt_r_.real();
    const double c4 = (j.r3 * j.r + j.r2 * j.r1 / 2.0) / 48.0;
    CurveJet out;
    out.y = y0_ + u * (s1 + u * (j.r1 / 4.0 + u * (j.r2 * s1 / 12.0 + u * c4)));
    out.dy = s1 + u * (j.r1 / 2.0 + u * (j.r2 * s1 / 4.0 + u * 4.0 * c4));
    out.d2y = j.r1 / 2.0 + u * (j.r2 * s1 / 2.0 + u * 12.0 * c4);
    return out;
}

complex SolutionCurve::operator()(complex x) const {
    if (constant_) {
        return y0_;
    }
    complex u;
    if (near_lattice(x, u)) {
        return taylor(u);
    }
    const WpValue v = (*wp_)(x);
    const QuarticJet& j = j0_;
    const complex pt = v.wp - j.r2 / 24.0;
    const complex num = 0.5 * j.r1 * pt + static_cast<double>(sign_) * v.wp_prime * sqrt_r_ +
                        j.r * j.r3 / 24.0;
    const complex den = 2.0 * pt * pt - j.r * j.r4 / 48.0;
    return y0_ + num / den;
}

double SolutionCurve::operator()(double x) const {
    if (mode_ != CurveMode::Real) {
        throw DomainError("real evaluation of a complex-mode curve");
    }
    return (*this)(complex(x, 0.0)).real();
}

CurveJet SolutionCurve::jet(double x) const {
    if (mode_ != CurveMode::Real) {
        throw DomainError("jet of a complex-mode curve");
    }
    if (constant_) {
        return {y0_, 0.0, 0.0};
    }
    complex off;
    if (near_lattice(complex(x, 0.0), off)) {
        return taylor_jet(off.real());
    }
    const RealWpValue v = wp_->real(x);
    const double g2 = wp_->invariants().g2;
    const double p = v.wp;
    const double dp = v.wp_prime;
    const double d2p = 6.0 * p * p - g2 / 2.0;
    const double d3p = 12.0 * p * dp;
    const QuarticJet& j = j0_;
    const double sr = static_cast<double>(sign_) * sqrt_r_.real();
    const double pt = p - j.r2 / 24.0;

    const double n0 = 0.5 * j.r1 * pt + dp * sr + j.r * j.r3 / 24.0;
    const double n1 = 0.5 * j.r1 * dp + d2p * sr;
    const double n2 = 0.5 * j.r1 * d2p + d3p * sr;
    const double d0 = 2.0 * pt * pt - j.r * j.r4 / 48.0;
    const double d1 = 4.0 * pt * dp;
    const double d2 = 4.0 * dp * dp + 4.0 * pt * d2p;

    CurveJet out;
    out.y = y0_ + n0 / d0;
    const double q = (n1 * d0 - n0 * d1) / (d0 * d0);
    out.dy = q;
    out.d2y = (n2 * d0 - n0 * d2) / (d0 * d0) - 2.0 * d1 * q / d0;
    return out;
}

std::array<complex, 2> SolutionCurve::pole_wp_values() const {
    const complex root = std::sqrt(complex(j0_.r * j0_.r4 / 96.0));
    const double base = j0_.r2 / 24.0;
    return {base + root, base - root};
}

double SolutionCurve::pole_distance(double x) const {
    if (constant_) {
        return infinity;
    }
    complex off;
    // y is analytic at the lattice points of P, where P(x) itself is unusable.
    const bool at_lattice = near_lattice(complex(x, 0.0), off);
    const double period = wp_->real_period();
    const double pmin = wp_->real_axis_min();
    double best = infinity;
    bool need_estimate = false;
    for (const complex& pv : pole_wp_values()) {
        const double scale = std::max(1.0, std::abs(pv));
        const bool real_value = std::abs(pv.imag()) <= 1e-12 * scale;
        if (real_value && pv.real() >= pmin - 1e-12 * scale) {
            // Real pole: P(t) = v at t = +-t_p (mod the real period).
            const double tp = wp_->inverse_real(std::max(pv.real(), pmin));
            if (!std::isfinite(tp)) {
                continue;
            }
            for (double c : {tp, -tp}) {
                double d = x - c;
                if (std::isfinite(period)) {
                    d -= period * std::round(d / period);
                }
                best = std::min(best, std::abs(d));
            }
        } else {
            need_estimate = true;
        }
    }
    if (need_estimate && !at_lattice) {
        // Off-axis poles: first-order distance |P - v| / |P'|, trusted only well
        // away from the lattice points where P itself blows up.
        const WpValue v = (*wp_)(complex(x, 0.0));
        const double lattice = wp_->real_lattice_distance(x);
        if (std::abs(v.wp_prime) > 0.0) {
            for (const complex& pv : pole_wp_values()) {
                const double est = std::abs(v.wp - pv) / std::abs(v.wp_prime);
                if (est < 0.25 * lattice) {
                    best = std::min(best, est);
                }
            }
        }
    }
    return best;
}

SolutionCurve weierstrass_solution(const QuarticCoefficients& R, double y0, int branch_sign,
                                   CurveMode mode, double pole_exclusion) {
    return SolutionCurve(R, y0, branch_sign, mode, pole_exclusion);
}

ResidualReport ode_residual(const SolutionCurve& curve, const std::vector<double>& xs,
                            double fd_step, OdeResidualOptions opts) {
    ResidualAccumulator acc;
    const QuarticCoefficients& R = curve.coefficients();
    for (double x : xs) {
        const double h = fd_step * std::max(1.0, std::abs(x));
        if (curve.pole_distance(x) < opts.pole_mask_steps * h) {
            acc.mask();
            continue;
        }
        const auto y = [&](double s) { return curve(s); };
        const double dy = central_derivative(y, x, h);
        const double r = eval_R(R, curve(x)).r;
        acc.add((dy * dy - r) / (1.0 + dy * dy + std::abs(r)));
    }
    ResidualReport rep = acc.finish(opts.tolerance);
    rep.notes.push_back("relative residual |y'^2 - R(y)| / (1 + |y'|^2 + |R(y)|)");
    return rep;
}

} // namespace cnlse
