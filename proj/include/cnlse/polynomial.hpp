#pragma once

#include <complex>
#include <vector>

namespace cnlse {

/// Dense real polynomial, coefficients in ascending order of degree.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> ascending);

    /// Degree after trimming exact-zero leading coefficients (-1 for the zero polynomial).
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    double coeff(int i) const;
    const std::vector<double>& coefficients() const { return c_; }

    double operator()(double x) const;
    std::complex<double> operator()(std::complex<double> x) const;
    /// Sum of |c_i| |x|^i, the natural rounding scale of an evaluation at x.
    double magnitude(double x) const;

    Polynomial derivative() const;

    struct DivMod;
    DivMod divmod(const Polynomial& divisor) const;

private:
    std::vector<double> c_;
};

struct Polynomial::DivMod {
    Polynomial quotient;
    Polynomial remainder;
};

struct RealRoot {
    double value;
    int multiplicity;
};

/// Real roots, ascending, with multiplicities.
///
/// Isolation is by Rolle intervals: the real roots of p' split the line into
/// monotone pieces, each holding at most one simple root, found by bisection.  A
/// critical point where |p| is below rel_tol times the evaluation scale is a
/// multiple root; its multiplicity is one more than the number of further
/// derivatives that vanish there.
std::vector<RealRoot> real_roots(const Polynomial& p, double rel_tol = 1e-12);

/// Sturm sequence p, p', -rem(...), ...
std::vector<Polynomial> sturm_sequence(const Polynomial& p);

/// Number of distinct real roots in (a, b] counted by sign changes of the
/// Sturm sequence.
int sturm_count(const std::vector<Polynomial>& seq, double a, double b);

/// Cauchy bound: every root satisfies |x| < bound.
double root_bound(const Polynomial& p);

} // namespace cnlse
