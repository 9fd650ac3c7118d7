#pragma once

#include <array>
#include <complex>
#include <limits>
#include <vector>

namespace cnlse {

using complex = std::complex<double>;

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// The pair (g2, g3) of a Weierstrass lattice.
struct EllipticInvariants {
    double g2 = 0.0;
    double g3 = 0.0;

    friend bool operator==(const EllipticInvariants&, const EllipticInvariants&) = default;
};

/// g2^3 - 27 g3^2.
double discriminant(EllipticInvariants inv);

/// Scale used by the degeneracy test: max(|g2|^3, 27 g3^2).
double discriminant_scale(EllipticInvariants inv);

/// True when |discriminant| < rel_tol * discriminant_scale.
bool is_degenerate(EllipticInvariants inv, double rel_tol = 1e-12);

/// Roots of 4 s^3 - g2 s - g3, sorted by descending real part (ties: larger
/// imaginary part first).
struct CubicRootTriple {
    std::array<complex, 3> e{};
    bool all_real = false;

    /// The largest real root (the only one when the pair is complex).
    double real_root() const;
};

CubicRootTriple cubic_roots(EllipticInvariants inv);

/// Real half-period of the lattice.  omega_real is +infinity in the solitary
/// (hyperbolic) limit.
struct LatticeData {
    double omega_real = infinity;
    bool degenerate = false;

    bool infinite() const { return omega_real == infinity; }
};

LatticeData real_half_period(EllipticInvariants inv);

/// Carlson's symmetric integral R_F(x, y, z) for arguments in the plane cut
/// along the negative real axis, at most one of them zero.
complex carlson_rf(complex x, complex y, complex z);

struct WpValue {
    complex wp;
    complex wp_prime;
};

struct RealWpValue {
    double wp;
    double wp_prime;
};

/// Weierstrass P for fixed real invariants.
///
/// Evaluation reduces the argument to the period cell around the origin, sums the
/// Laurent series at z / 2^n and applies the duplication formulas n times; P' is
/// doubled with the addition formula (no square root), so its sign is never
/// ambiguous.  Arguments nearer a half period h than the origin go through
/// P(h + u) = e + (e - e')(e - e'') / (P(u) - e).  Degenerate lattices use the
/// closed hyperbolic/trigonometric form.
class WeierstrassP {
public:
    explicit WeierstrassP(EllipticInvariants inv, double pole_exclusion = 1e-6);

    /// Throws PoleProximity within the exclusion radius of a lattice point.
    WpValue operator()(complex z) const;
    RealWpValue real(double x) const;

    /// Evaluation without lattice reduction (plain duplication from the origin).
    WpValue unreduced(complex z) const;

    complex nearest_lattice_point(complex z) const;
    /// Distance from a real x to the nearest real-axis lattice point.
    double real_lattice_distance(double x) const;

    EllipticInvariants invariants() const { return inv_; }
    const CubicRootTriple& roots() const { return roots_; }
    bool degenerate() const { return degenerate_; }
    double pole_exclusion() const { return pole_exclusion_; }

    /// Real period 2*omega (infinite in the solitary limit).
    double real_period() const { return real_period_; }
    double real_half_period() const { return real_period_ / 2.0; }
    /// Infimum of P over the real axis (attained at the half period, or
    /// approached at infinity in the solitary limit).
    double real_axis_min() const { return real_min_; }
    /// Length of the shortest non-zero lattice vector.
    double shortest_period() const { return shortest_; }
    /// Lattice generators (0, 1 or 2 of them).
    const std::vector<complex>& generators() const { return generators_; }

    /// The t in (0, omega] with P(t) = v, for real v >= real_axis_min().
    double inverse_real(double v) const;

private:
    struct HalfPeriod {
        complex point;
        complex root;
        complex k;
    };

    WpValue series_and_duplicate(complex z) const;
    WpValue closed_form(complex z) const;

    EllipticInvariants inv_;
    double pole_exclusion_;
    CubicRootTriple roots_;
    bool degenerate_ = false;
    double double_root_ = 0.0;
    std::vector<complex> generators_;
    double real_period_ = infinity;
    double real_min_ = 0.0;
    double shortest_ = infinity;
    double series_radius_ = infinity;
    std::vector<double> laurent_;
    std::vector<HalfPeriod> half_periods_;
};

/// (P(z), P'(z)) for the given invariants.
WpValue wp_eval(complex z, EllipticInvariants inv, double pole_exclusion = 1e-6);

/// Closed hyperbolic/trigonometric form of P for a degenerate lattice.
/// Throws NotDegenerate when |discriminant| exceeds the tolerance.
complex wp_degenerate(complex z, EllipticInvariants inv, double rel_tol = 1e-12);

} // namespace cnlse
