#pragma once

#include "cnlse/polynomial.hpp"
#include "cnlse/report.hpp"
#include "cnlse/weierstrass.hpp"

#include <memory>
#include <vector>

namespace cnlse {

/// R(y) = alpha y^4 + 4 beta y^3 + 6 gamma y^2 + 4 delta y + epsilon.
struct QuarticCoefficients {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    double epsilon = 0.0;

    friend bool operator==(const QuarticCoefficients&, const QuarticCoefficients&) = default;
};

/// R and its first four derivatives at one point.
struct QuarticJet {
    double r = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    double r4 = 0.0;
};

QuarticJet eval_R(const QuarticCoefficients& R, double y);

/// Standard invariants of the binary quartic:
/// g2 = a e - 4 b d + 3 c^2,  g3 = a c e + 2 b c d - a d^2 - b^2 e - c^3.
EllipticInvariants quartic_invariants(const QuarticCoefficients& R);

Polynomial as_polynomial(const QuarticCoefficients& R);

/// Coefficients of y -> R(y + s).
QuarticCoefficients translate(const QuarticCoefficients& R, double s);

enum class CurveMode { Real, Complex };

/// Value and first two x-derivatives of a real curve.
struct CurveJet {
    double y = 0.0;
    double dy = 0.0;
    double d2y = 0.0;
};

/// y(x) solving (y')^2 = R(y) through
///
///   y = y0 + [R'/2 (P - R''/24) + s P' sqrt(R) + R R'''/24]
///            / [2 (P - R''/24)^2 - R R''''/48]
///
/// with R and its derivatives taken at y0, P = P(x; g2, g3) and s the branch
/// sign.  y(0) = y0 and y'(0) = -s sqrt(R(y0)).  Near lattice points of P the
/// formula is replaced by the Taylor expansion of the ODE around y0.
class SolutionCurve {
public:
    SolutionCurve(QuarticCoefficients R, double y0, int branch_sign, CurveMode mode,
                  double pole_exclusion = 1e-6);
    /// Uses the given P (e.g. invariants known to be shared across a family).
    SolutionCurve(QuarticCoefficients R, double y0, int branch_sign, CurveMode mode,
                  std::shared_ptr<const WeierstrassP> wp);

    double operator()(double x) const;
    complex operator()(complex x) const;
    CurveJet jet(double x) const;

    const QuarticCoefficients& coefficients() const { return R_; }
    const QuarticJet& at_y0() const { return j0_; }
    double y0() const { return y0_; }
    int branch_sign() const { return sign_; }
    CurveMode mode() const { return mode_; }
    EllipticInvariants invariants() const { return wp_->invariants(); }
    const WeierstrassP& wp() const { return *wp_; }
    std::shared_ptr<const WeierstrassP> shared_wp() const { return wp_; }

    /// R(y0) < 0: the curve is complex on the real axis.
    bool negative_radicand() const { return negative_; }
    /// R(y0) = R'(y0) = 0: y is identically y0.
    bool identically_constant() const { return constant_; }

    /// The two values of P at which the denominator vanishes (poles of y).
    std::array<complex, 2> pole_wp_values() const;
    /// Distance from real x to the nearest pole of y.  Poles on the real axis
    /// are located exactly through inverse_real; off-axis ones use the
    /// first-order estimate |P(x) - v| / |P'(x)| (infinity if none).
    double pole_distance(double x) const;

private:
    void init();
    bool near_lattice(complex x, complex& offset) const;
    complex taylor(complex u) const;
    CurveJet taylor_jet(double u) const;

    QuarticCoefficients R_;
    double y0_;
    int sign_;
    CurveMode mode_;
    std::shared_ptr<const WeierstrassP> wp_;
    QuarticJet j0_;
    complex sqrt_r_;
    bool negative_ = false;
    bool constant_ = false;
    double taylor_radius_ = 0.0;
};

/// Throws NegativeRadicand when mode is Real and R(y0) < 0 (values at rounding
/// level are clamped to zero).
SolutionCurve weierstrass_solution(const QuarticCoefficients& R, double y0, int branch_sign = 1,
                                   CurveMode mode = CurveMode::Real, double pole_exclusion = 1e-6);

/// Fourth-order central first derivative of a real function.
template <class F>
double central_derivative(const F& f, double x, double h) {
    return (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h);
}

struct OdeResidualOptions {
    double tolerance = 1e-6;
    /// Points closer to a pole of y than this many stencil steps are masked.
    double pole_mask_steps = 100.0;
};

/// Max and RMS of |y'^2 - R(y)| / (1 + |y'|^2 + |R(y)|) with y' from the
/// fourth-order central stencil, step fd_step * max(1, |x|).
ResidualReport ode_residual(const SolutionCurve& curve, const std::vector<double>& xs,
                            double fd_step = 1e-4, OdeResidualOptions opts = {});

} // namespace cnlse
