#pragma once

#include "cnlse/quartic.hpp"
#include "cnlse/weierstrass.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace cnlse {

/// Constants of the reduced system: nonlinearity a (nonzero), integration
/// constants c1, c2, c3 and the phase offset c0.
struct CnlseParams {
    double a;
    double c1;
    double c2;
    double c3 = 0.0;
    double c0 = 0.0;

    /// Throws DomainError when a is zero or any value is not finite.
    CnlseParams(double a_, double c1_, double c2_, double c3_ = 0.0, double c0_ = 0.0);

    friend bool operator==(const CnlseParams&, const CnlseParams&) = default;
};

/// Coefficient conventions for R1 and R2.  Printed: gamma1 = -(2c1^2 + 8ac2)/3
/// and epsilon2 = 2c2 + 3ah^2/2 - c1h.  Derived (expanding the first integrals
/// directly): gamma1 = -(2c1^2 + 4ac2)/3 and epsilon2 = c2 - c1h + 3ah^2/2.  The
/// two pairs differ by c2 -> 2c2.
enum class Convention { Printed, Derived };

std::string to_string(Convention c);
Convention parse_convention(const std::string& s);

QuarticCoefficients r1_coefficients(const CnlseParams& p, Convention conv);

/// Throws DomainError for h < 0, or h = 0 with h_z != 0.
QuarticCoefficients r2_coefficients(const CnlseParams& p, double h, double h_z, Convention conv);

/// How f0(z) is chosen for the generic f(t, z).
struct F0Rule {
    enum class Kind { Explicit, NearestRoot };
    Kind kind = Kind::NearestRoot;
    /// Explicit: f0(z) = value for every z.  NearestRoot: f0(z) is the real
    /// root of R2(., z) nearest value.
    double value = 0.87;
};

struct GenericConfig {
    double h0 = 0.0;
    F0Rule f0;
    int h_branch = 1;
    int f_branch = 1;
};

/// h(z), f(t, z) and the phase of the generic (d_z != 0) construction.
class GenericSystem {
public:
    GenericSystem(CnlseParams p, GenericConfig cfg, Convention conv, double z_ref = 1.0,
                  double pole_exclusion = 1e-6);

    const CnlseParams& params() const { return p_; }
    const GenericConfig& config() const { return cfg_; }
    Convention convention() const { return conv_; }

    const SolutionCurve& h_curve() const { return h_; }
    double h(double z) const { return h_(z); }
    CurveJet h_jet(double z) const { return h_.jet(z); }

    QuarticCoefficients r2_at(double z) const;
    double f0(double z) const;
    /// The curve t -> f(t, z); all z share one P(t; g2t, g3t).
    SolutionCurve f_curve(double z) const;
    double f(double t, double z) const { return f_curve(z)(t); }
    /// f through the complex-mode curve; defined also where R2(f0(z), z) < 0.
    complex f_complex(double t, double z) const;

    /// Copy of this system with a different f0 rule (same h, same P in t).
    GenericSystem with_f0(F0Rule rule) const;

    EllipticInvariants t_invariants() const { return wp_t_->invariants(); }
    const WeierstrassP& wp_t() const { return *wp_t_; }

    /// c0 + integral_0^z (c1 - 2a h(s)) ds.
    double phi(double z) const;

private:
    CnlseParams p_;
    GenericConfig cfg_;
    Convention conv_;
    SolutionCurve h_;
    std::shared_ptr<const WeierstrassP> wp_t_;
};

/// Psi together with the derivatives entering the CNLSE.
struct PsiJet {
    complex psi;
    complex psi_t;
    complex psi_tt;
    complex psi_z;
};

/// Psi(t, z) = (f(t, z) + i d(z)) exp(i phi(z)).
class PsiEvaluator {
public:
    virtual ~PsiEvaluator() = default;

    virtual double f(double t, double z) const = 0;
    virtual double d(double z) const = 0;
    virtual double phi(double z) const = 0;
    virtual std::string name() const = 0;

    complex operator()(double t, double z) const;

    /// Closed-form derivatives where the family has them; nullopt means
    /// "use finite differences at this point".
    virtual std::optional<PsiJet> jet(double t, double z) const;

    /// Distance (in t) to the nearest singularity of the amplitude; used for
    /// pole masking.
    virtual double singular_distance(double t, double z) const;
};

using PsiPtr = std::shared_ptr<const PsiEvaluator>;

/// Psi assembled from user-supplied component functions.
class ComponentPsi : public PsiEvaluator {
public:
    using Fn2 = std::function<double(double, double)>;
    using Fn1 = std::function<double(double)>;

    ComponentPsi(std::string name, Fn2 f, Fn1 d, Fn1 phi);

    double f(double t, double z) const override { return f_(t, z); }
    double d(double z) const override { return d_(z); }
    double phi(double z) const override { return phi_(z); }
    std::string name() const override { return name_; }

private:
    std::string name_;
    Fn2 f_;
    Fn1 d_;
    Fn1 phi_;
};

enum class FamilyTag { GenericF, G1, GPlus, GMinus, ConstantK, SechBright, TanhDark, FT0 };

std::string to_string(FamilyTag t);
FamilyTag parse_family(const std::string& s);
bool is_g_family(FamilyTag t);

/// Sign of the amplitude f = sigma sqrt(g).  NonNegative is the literal
/// sqrt(g); Signed flips sigma at each simple zero of g so that f is smooth
/// (the non-negative root has a kink there and Psi_tt is not defined).
enum class Amplitude { Signed, NonNegative };

std::string to_string(Amplitude a);
Amplitude parse_amplitude(const std::string& s);

struct SolutionFamily {
    FamilyTag tag = FamilyTag::GPlus;
    Amplitude amplitude = Amplitude::Signed;
    /// GenericF only.
    GenericConfig generic;
    Convention convention = Convention::Printed;
    /// FT0 only.
    std::function<double(double)> ft0_f;
    std::function<double(double)> ft0_f_prime;
    double ft0_c = 1.0;
};

PsiPtr assemble_psi(const CnlseParams& p, const SolutionFamily& family);

/// Constant-modulus solution g = -2c2/sqrt(-a c2), k = sqrt(k_-^2).
struct ConstantKSolution {
    double g;
    double k;
};

/// Requires a > 0, c2 < 0 and k_-^2 = (c1 - 2 sqrt(-a c2))/a >= 0; throws
/// ConstraintViolation otherwise.
ConstantKSolution gconst_solution(const CnlseParams& p);

/// Admissible g0 for d = k: k = 0 gives {0} and the positive g0+-; k^2 = k_-^2
/// gives {0, 2 sqrt(-c2/a)}.  k^2 = k_+^2 (which forces g0 < 0) and any other k
/// throw InvalidK.
std::vector<double> admissible_sets(const CnlseParams& p, double k);

/// Plane-wave-type solution with f_t = 0: d = sqrt(c - f^2),
/// phi = a c z + arcsin(f / sqrt(c)) + c0.
class Ft0Psi : public PsiEvaluator {
public:
    Ft0Psi(CnlseParams p, std::function<double(double)> f, std::function<double(double)> f_prime,
           double c);

    double f(double t, double z) const override;
    double d(double z) const override;
    double phi(double z) const override;
    std::string name() const override { return "ft0"; }
    std::optional<PsiJet> jet(double t, double z) const override;

    /// Residuals of f_z = d(phi_z - a(d^2+f^2)) and d_z + f(phi_z - a(d^2+f^2)) = 0.
    std::array<double, 2> system_residual(double z) const;

private:
    double phi_z(double z) const;
    double d_z(double z) const;

    CnlseParams p_;
    std::function<double(double)> f_;
    std::function<double(double)> fp_;
    double c_;
};

std::shared_ptr<const Ft0Psi> ft0_solution(std::function<double(double)> f,
                                           std::function<double(double)> f_prime, double c,
                                           const CnlseParams& p);

/// t-period 2 omega(g2g, g3g) of the k = 0 g-families (infinity when the lattice
/// is solitary).  NotPeriodicFamily for the other tags.
double t_period(const CnlseParams& p, FamilyTag family);

} // namespace cnlse
