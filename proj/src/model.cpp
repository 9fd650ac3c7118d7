#include "cnlse/model.hpp"

#include "cnlse/errors.hpp"
#include "cnlse/nongeneric.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

namespace cnlse {

CnlseParams::CnlseParams(double a_, double c1_, double c2_, double c3_, double c0_)
    : a(a_), c1(c1_), c2(c2_), c3(c3_), c0(c0_) {
    if (!(std::isfinite(a) && std::isfinite(c1) && std::isfinite(c2) && std::isfinite(c3) &&
          std::isfinite(c0))) {
        throw DomainError("parameters must be finite");
    }
    if (a == 0.0) {
        throw DomainError("a must be nonzero");
    }
}

std::string to_string(Convention c) {
    return c == Convention::Printed ? "printed" : "derived";
}

Convention parse_convention(const std::string& s) {
    if (s == "printed") {
        return Convention::Printed;
    }
    if (s == "derived") {
        return Convention::Derived;
    }
    throw DomainError("unknown convention '" + s + "' (expected printed|derived)");
}

QuarticCoefficients r1_coefficients(const CnlseParams& p, Convention conv) {
    const double ac2 = conv == Convention::Printed ? 8.0 * p.a * p.c2 : 4.0 * p.a * p.c2;
    return {-16.0 * p.a * p.a, 4.0 * p.a * p.c1, -(2.0 * p.c1 * p.c1 + ac2) / 3.0, p.c3, 0.0};
}

QuarticCoefficients r2_coefficients(const CnlseParams& p, double h, double h_z, Convention conv) {
    if (h < 0.0) {
        throw DomainError("r2_coefficients: h < 0");
    }
    if (h == 0.0 && h_z != 0.0) {
        throw DomainError("r2_coefficients: h = 0 with h_z != 0");
    }
    const double delta = h == 0.0 ? 0.0 : h_z / (4.0 * std::sqrt(h));
    const double constant = conv == Convention::Printed ? 2.0 * p.c2 : p.c2;
    return {-p.a / 2.0, 0.0, (p.c1 - 3.0 * p.a * h) / 6.0, delta,
            constant + 1.5 * p.a * h * h - p.c1 * h};
}

GenericSystem::GenericSystem(CnlseParams p, GenericConfig cfg, Convention conv, double z_ref,
                             double pole_exclusion)
    : p_(p),
      cfg_(cfg),
      conv_(conv),
      h_(r1_coefficients(p, conv), cfg.h0, cfg.h_branch, CurveMode::Real, pole_exclusion) {
    const CurveJet hj = h_.jet(z_ref);
    wp_t_ = std::make_shared<const WeierstrassP>(
        quartic_invariants(r2_coefficients(p_, hj.y, hj.dy, conv_)), pole_exclusion);
}

QuarticCoefficients GenericSystem::r2_at(double z) const {
    const CurveJet hj = h_.jet(z);
    return r2_coefficients(p_, hj.y, hj.dy, conv_);
}

double GenericSystem::f0(double z) const {
    if (cfg_.f0.kind == F0Rule::Kind::Explicit) {
        return cfg_.f0.value;
    }
    const std::vector<RealRoot> roots = real_roots(as_polynomial(r2_at(z)));
    if (roots.empty()) {
        throw DomainError("R2(., z) has no real root");
    }
    double best = roots.front().value;
    for (const RealRoot& r : roots) {
        if (std::abs(r.value - cfg_.f0.value) < std::abs(best - cfg_.f0.value)) {
            best = r.value;
        }
    }
    return best;
}

SolutionCurve GenericSystem::f_curve(double z) const {
    return SolutionCurve(r2_at(z), f0(z), cfg_.f_branch, CurveMode::Real, wp_t_);
}

complex GenericSystem::f_complex(double t, double z) const {
    const SolutionCurve c(r2_at(z), f0(z), cfg_.f_branch, CurveMode::Complex, wp_t_);
    return c(complex(t, 0.0));
}

GenericSystem GenericSystem::with_f0(F0Rule rule) const {
    GenericSystem copy(*this);
    copy.cfg_.f0 = rule;
    return copy;
}

double GenericSystem::phi(double z) const {
    if (z == 0.0) {
        return p_.c0;
    }
    auto integrand = [&](double s) { return p_.c1 - 2.0 * p_.a * h_(s); };
    const double v =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, z, 15, 1e-12);
    return p_.c0 + v;
}

complex PsiEvaluator::operator()(double t, double z) const {
    return complex(f(t, z), d(z)) * std::polar(1.0, phi(z));
}

std::optional<PsiJet> PsiEvaluator::jet(double, double) const {
    return std::nullopt;
}

double PsiEvaluator::singular_distance(double, double) const {
    return infinity;
}

ComponentPsi::ComponentPsi(std::string name, Fn2 f, Fn1 d, Fn1 phi)
    : name_(std::move(name)), f_(std::move(f)), d_(std::move(d)), phi_(std::move(phi)) {}

std::string to_string(FamilyTag t) {
    switch (t) {
    case FamilyTag::GenericF:
        return "generic";
    case FamilyTag::G1:
        return "g1";
    case FamilyTag::GPlus:
        return "g+";
    case FamilyTag::GMinus:
        return "g-";
    case FamilyTag::ConstantK:
        return "constant-k";
    case FamilyTag::SechBright:
        return "sech";
    case FamilyTag::TanhDark:
        return "tanh";
    case FamilyTag::FT0:
        return "ft0";
    }
    return "unknown";
}

FamilyTag parse_family(const std::string& s) {
    for (FamilyTag t : {FamilyTag::GenericF, FamilyTag::G1, FamilyTag::GPlus, FamilyTag::GMinus,
                        FamilyTag::ConstantK, FamilyTag::SechBright, FamilyTag::TanhDark,
                        FamilyTag::FT0}) {
        if (to_string(t) == s) {
            return t;
        }
    }
    if (s == "gplus") {
        return FamilyTag::GPlus;
    }
    if (s == "gminus") {
        return FamilyTag::GMinus;
    }
    throw DomainError("unknown family '" + s + "'");
}

bool is_g_family(FamilyTag t) {
    return t == FamilyTag::G1 || t == FamilyTag::GPlus || t == FamilyTag::GMinus ||
           t == FamilyTag::SechBright || t == FamilyTag::TanhDark;
}

std::string to_string(Amplitude a) {
    return a == Amplitude::Signed ? "signed" : "nonnegative";
}

Amplitude parse_amplitude(const std::string& s) {
    if (s == "signed") {
        return Amplitude::Signed;
    }
    if (s == "nonnegative") {
        return Amplitude::NonNegative;
    }
    throw DomainError("unknown amplitude '" + s + "' (expected signed|nonnegative)");
}

PsiPtr assemble_psi(const CnlseParams& p, const SolutionFamily& family) {
    switch (family.tag) {
    case FamilyTag::GenericF:
        return std::make_shared<GenericPsi>(
            std::make_shared<GenericSystem>(p, family.generic, family.convention));
    case FamilyTag::ConstantK:
        return std::make_shared<ConstantKPsi>(p);
    case FamilyTag::FT0:
        if (!family.ft0_f || !family.ft0_f_prime) {
            throw DomainError("ft0 family needs f and f'");
        }
        return ft0_solution(family.ft0_f, family.ft0_f_prime, family.ft0_c, p);
    default:
        return std::make_shared<NongenericPsi>(NongenericG(p, family.tag), family.amplitude);
    }
}

ConstantKSolution gconst_solution(const CnlseParams& p) {
    if (!(p.a > 0.0 && p.c2 < 0.0)) {
        throw ConstraintViolation("constant-k family requires a > 0 and c2 < 0");
    }
    const double root = std::sqrt(-p.a * p.c2);
    const double k2 = (p.c1 - 2.0 * root) / p.a;
    const double tol = 1e-12 * std::max(std::abs(p.c1), 2.0 * root) / p.a;
    if (k2 < -tol) {
        throw ConstraintViolation("constant-k family requires k_-^2 = (c1 - 2 sqrt(-a c2))/a >= 0");
    }
    return {-2.0 * p.c2 / root, std::sqrt(std::max(0.0, k2))};
}

std::vector<double> admissible_sets(const CnlseParams& p, double k) {
    std::vector<double> out{0.0};
    if (k == 0.0) {
        if (constraint_discriminant(p) >= -boundary_tolerance(p)) {
            for (double g : g0_plus_minus(p)) {
                if (g > 0.0 && std::abs(g - out.back()) > 1e-15 * std::abs(g)) {
                    out.push_back(g);
                }
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    if (!(p.a * p.c2 < 0.0)) {
        throw InvalidK("k != 0 requires a c2 < 0 (the k constraint has no other nonzero roots)");
    }
    const double root = std::sqrt(-p.a * p.c2);
    const double k2 = k * k;
    const double k2_minus = (p.c1 - 2.0 * root) / p.a;
    const double k2_plus = (p.c1 + 2.0 * root) / p.a;
    const double tol = 1e-9 * std::max({std::abs(k2_minus), std::abs(k2_plus), 1e-300});
    if (std::abs(k2 - k2_minus) <= tol) {
        out.push_back(2.0 * std::sqrt(-p.c2 / p.a));
        return out;
    }
    if (std::abs(k2 - k2_plus) <= tol) {
        throw InvalidK("k^2 = k_+^2 is excluded: it forces g0 = -2 sqrt(-c2/a) < 0");
    }
    throw InvalidK("k is not a root of k (a^2 k^4 - 2 a c1 k^2 + c1^2 + 4 a c2) = 0");
}

Ft0Psi::Ft0Psi(CnlseParams p, std::function<double(double)> f,
               std::function<double(double)> f_prime, double c)
    : p_(p), f_(std::move(f)), fp_(std::move(f_prime)), c_(c) {
    if (!(c > 0.0)) {
        throw DomainError("ft0 family requires c > 0");
    }
}

double Ft0Psi::f(double, double z) const {
    const double v = f_(z);
    if (!(std::abs(v) < std::sqrt(c_))) {
        throw DomainError("ft0 family requires |f(z)| < sqrt(c)");
    }
    return v;
}

double Ft0Psi::d(double z) const {
    const double v = f(0.0, z);
    return std::sqrt(c_ - v * v);
}

double Ft0Psi::phi(double z) const {
    return p_.a * c_ * z + std::asin(f(0.0, z) / std::sqrt(c_)) + p_.c0;
}

double Ft0Psi::phi_z(double z) const {
    return p_.a * c_ + fp_(z) / d(z);
}

double Ft0Psi::d_z(double z) const {
    return -f(0.0, z) * fp_(z) / d(z);
}

std::optional<PsiJet> Ft0Psi::jet(double t, double z) const {
    PsiJet j;
    const complex e = std::polar(1.0, phi(z));
    const complex amp(f(t, z), d(z));
    j.psi = amp * e;
    j.psi_t = 0.0;
    j.psi_tt = 0.0;
    j.psi_z = (complex(fp_(z), d_z(z)) + complex(0.0, phi_z(z)) * amp) * e;
    return j;
}

std::array<double, 2> Ft0Psi::system_residual(double z) const {
    const double fv = f(0.0, z);
    const double dv = d(z);
    const double w = phi_z(z) - p_.a * (dv * dv + fv * fv);
    return {fp_(z) - dv * w, d_z(z) + fv * w};
}

std::shared_ptr<const Ft0Psi> ft0_solution(std::function<double(double)> f,
                                           std::function<double(double)> f_prime, double c,
                                           const CnlseParams& p) {
    return std::make_shared<const Ft0Psi>(p, std::move(f), std::move(f_prime), c);
}

double t_period(const CnlseParams& p, FamilyTag family) {
    if (!is_g_family(family)) {
        throw NotPeriodicFamily("t_period applies to the k = 0 g-families only");
    }
    const WeierstrassP wp(quartic_invariants(g_quartic_coefficients(p)));
    return wp.real_period();
}

} // namespace cnlse
