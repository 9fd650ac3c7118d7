#pragma once

#include "cnlse/model.hpp"
#include "cnlse/nongeneric.hpp"

#include <string>

namespace cnlse {

enum class CaseTag { A, B, C, D, E, None };

std::string to_string(CaseTag t);

/// Which parameter region (a, c1, c2) lies in, with the quantities that decided it.
struct ConstraintCase {
    CaseTag tag = CaseTag::None;
    int sign_a = 0;
    int sign_c1 = 0;
    /// Sign of c2, with |4 a c2| <= tolerance counted as 0.
    int sign_c2 = 0;
    /// c1^2 + 4 a c2.
    double discriminant = 0.0;
    double tolerance = 0.0;
};

/// Regions of real non-negative k = 0 solutions:
///   A: a < 0, c1 < 0, c2 > 0, c1^2 + 4ac2 > 0
///   B: a > 0, c1 > 0, c2 = 0
///   C: a < 0, c1 < 0, c1^2 + 4ac2 = 0
///   D: a > 0, c2 > 0
///   E: a > 0, c1 > 0, c2 < 0, c1^2 + 4ac2 >= 0
/// The equalities use boundary_tolerance(p, rel_tol); on a tie the degenerate
/// cases B and C win.
ConstraintCase constraint_case(const CnlseParams& p, double rel_tol = 1e-9);

enum class Boundedness {
    Bounded,
    Unbounded,
    Nonreal,
    BrightSolitary,
    DarkSolitary,
    IdenticallyZero,
    Constant,
};

std::string to_string(Boundedness b);

/// Bounded for the solitary, constant and zero classes; the others map to themselves.
Boundedness coarse(Boundedness b);

struct BoundednessVerdict {
    Boundedness g1 = Boundedness::Bounded;
    Boundedness g_plus = Boundedness::Bounded;
    Boundedness g_minus = Boundedness::Bounded;

    Boundedness of(FamilyTag family) const;
    friend bool operator==(const BoundednessVerdict&, const BoundednessVerdict&) = default;
};

/// A, D: g1, g+ bounded, g- unbounded.  E: g+, g- bounded, g1 unbounded.
/// B: g+ bright solitary, g1 = 0 (and g- = 0, since g0- = 0 there).
/// C: g1 dark solitary, g+- constant c1/a.  Throws UnclassifiedCase for None.
BoundednessVerdict expected_boundedness(const ConstraintCase& c);

/// Empirical class of a k = 0 family.  Unbounded iff a pole value of the
/// Weierstrass formula is attained by P on the real axis; otherwise nonreal iff
/// g < 0 somewhere on a scan of one period (or a wide window when the lattice
/// is solitary); the solitary, constant and zero classes are told apart by
/// g(0) and g at large |t|.
Boundedness measured_boundedness(const NongenericG& g, int n_scan = 512);

/// As above; g+- whose g0 is not real (c1^2 + 4ac2 < 0) are nonreal.
Boundedness measured_boundedness(const CnlseParams& p, FamilyTag family, int n_scan = 512);

BoundednessVerdict measured_verdict(const CnlseParams& p, int n_scan = 512);

struct ShiftMatch {
    double shift = 0.0;
    double max_diff = infinity;
};

/// min over s in [0, L) of max_t |g+(t) - g-(t + s)| over one period.
ShiftMatch shift_equivalence(const CnlseParams& p, int n_t = 128, int n_s = 256);

} // namespace cnlse
