#pragma once

#include "cnlse/model.hpp"

#include <cmath>
#include <optional>

namespace cnlse {

/// R of (g_t)^2 = 2g(4c2 + 2(c1 - a k^2) g - a g^2).
QuarticCoefficients g_quartic_coefficients(const CnlseParams& p, double k = 0.0);

/// c1^2 + 4 a c2.
double constraint_discriminant(const CnlseParams& p);

/// Absolute tolerance for the boundaries c2 = 0 and c1^2 + 4 a c2 = 0:
/// rel_tol * max(c1^2, |4 a c2|).
double boundary_tolerance(const CnlseParams& p, double rel_tol = 1e-9);

/// g0+- = (c1 +- sqrt(c1^2 + 4 a c2)) / a; requires c1^2 + 4 a c2 >= -tolerance.
std::array<double, 2> g0_plus_minus(const CnlseParams& p);

/// Where f = sigma sqrt(g) changes sign.
enum class AmplitudeZeros { None, AtLattice, AtHalfPeriod, AtOrigin };

/// g(t) of the k = 0 families.  G1, GPlus and GMinus are the Weierstrass
/// formula for (g_t)^2 = R(g) started at g0 = 0, g0+, g0- respectively;
/// SechBright and TanhDark are the closed degenerate forms.
class NongenericG {
public:
    /// Throws ConstraintViolation naming the side condition that fails
    /// (c3 = 0 for all of them).
    NongenericG(CnlseParams p, FamilyTag family, double pole_exclusion = 1e-6);

    FamilyTag family() const { return family_; }
    const CnlseParams& params() const { return p_; }

    double operator()(double t) const;
    CurveJet jet(double t) const;

    double g0() const { return g0_; }
    EllipticInvariants invariants() const { return inv_; }
    /// L_t = 2 omega(g2g, g3g).
    double period() const;
    /// g(t) = g0 for all t (also at the boundary ties, within boundary_tolerance).
    bool identically_constant() const { return constant_; }
    /// Weierstrass curve behind G1/GPlus/GMinus (null for the closed forms and
    /// the constant ties).
    const SolutionCurve* curve() const { return curve_ ? &*curve_ : nullptr; }

    double singular_distance(double t) const;
    AmplitudeZeros zeros() const { return zeros_; }
    /// sigma(t) in f = sigma sqrt(g).
    double amplitude_sign(double t) const;

    /// Closed form of g+- as printed in the literature: 4 g0 (2c1^2 + 9ac2 - 3P(c1 + 3P)) / (6P + c1 +- 3s)^2.
    double printed_closed_form(double t) const;
    /// The printed expanded form of the Weierstrass formula for (g_t)^2 = R(g)
    /// with this family's g0 and k = 0.
    double printed_weierstrass_form(double t) const;

private:
    CnlseParams p_;
    FamilyTag family_;
    double g0_ = 0.0;
    EllipticInvariants inv_;
    std::shared_ptr<const WeierstrassP> wp_;
    std::optional<SolutionCurve> curve_;
    AmplitudeZeros zeros_ = AmplitudeZeros::None;
    bool constant_ = false;
};

/// Psi = sigma sqrt(g(t)) exp(i (c1 z + c0)).
class NongenericPsi : public PsiEvaluator {
public:
    NongenericPsi(NongenericG g, Amplitude amplitude);

    double f(double t, double z) const override;
    double d(double) const override { return 0.0; }
    double phi(double z) const override;
    std::string name() const override { return to_string(g_.family()); }
    std::optional<PsiJet> jet(double t, double z) const override;
    double singular_distance(double t, double) const override { return g_.singular_distance(t); }

    const NongenericG& g() const { return g_; }

private:
    NongenericG g_;
    Amplitude amplitude_;
};

/// Psi = (sqrt(g) + i k) exp(i (c1 z + c0)) with constant g and k.
class ConstantKPsi : public PsiEvaluator {
public:
    explicit ConstantKPsi(CnlseParams p);

    double f(double, double) const override { return std::sqrt(sol_.g); }
    double d(double) const override { return sol_.k; }
    double phi(double z) const override { return p_.c1 * z + p_.c0; }
    std::string name() const override { return "constant-k"; }
    std::optional<PsiJet> jet(double t, double z) const override;

    const ConstantKSolution& solution() const { return sol_; }

private:
    CnlseParams p_;
    ConstantKSolution sol_;
};

/// Psi of the generic construction: f(t, z), d = sqrt(h(z)), phi by quadrature.
class GenericPsi : public PsiEvaluator {
public:
    explicit GenericPsi(std::shared_ptr<const GenericSystem> sys);

    double f(double t, double z) const override { return sys_->f(t, z); }
    double d(double z) const override;
    double phi(double z) const override { return sys_->phi(z); }
    std::string name() const override { return "generic"; }

private:
    std::shared_ptr<const GenericSystem> sys_;
};

} // namespace cnlse
