#pragma once

#include "cnlse/model.hpp"
#include "cnlse/report.hpp"

#include <functional>
#include <vector>

namespace cnlse {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

struct GridSpec {
    Interval t{-4.0, 4.0};
    Interval z{-2.0, 2.0};
    int n_t = 41;
    int n_z = 41;
    double pole_mask_radius = 0.05;

    /// Throws DomainError for empty ranges, fewer than 9 points or a
    /// non-positive mask radius.
    void validate() const;
    double t_at(int i) const;
    double z_at(int j) const;
};

enum class Scheme { Analytic, FiniteDifference };

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& s);

struct CnlseResidualOptions {
    /// <= 0 selects the scheme default: 1e-6 analytic, 1e-4 finite differences.
    double tolerance = 0.0;
    /// <= 0 means equal to the tolerance.
    double violation_floor = 0.0;
    /// Divide by 1 + |Psi_z| + |Psi_tt| + |a||Psi|^3 (for unbounded families).
    bool relative = false;
    double fd_step_t = 1e-3;
    double fd_step_z = 1e-4;
};

/// |i Psi_z + Psi_tt + a Psi |Psi|^2| over the grid.  The analytic scheme uses
/// the family's closed-form derivatives and falls back to central differences
/// at points where it has none.  Points within the mask radius of a singularity
/// are masked.
ResidualReport cnlse_residual(const PsiEvaluator& psi, double a, const GridSpec& grid,
                              Scheme scheme, CnlseResidualOptions opts = {});

/// Real roots of R2(., z) with multiplicities, ascending.
std::vector<RealRoot> f0_roots(const CnlseParams& p, double h_at_z, double h_z_at_z,
                               Convention conv);

/// Evaluated through the complex-mode curve, so the imaginary parts are
/// nonzero only where R2(f0(z), z) < 0 near z.
struct FzDelta {
    double delta = 0.0;  // Re of f_z - sqrt(h)(c1 - 3ah - af^2)
    double delta_imag = 0.0;
    double curve_residual = 0.0; // f_t^2 - R2(f, z)
    double f = 0.0;
    double f_z = 0.0;
    /// Finite-difference noise estimate for f_z: Richardson correction plus
    /// rounding.
    double noise = 0.0;
};

/// f_z by central differences with step fd_step, one Richardson step.
FzDelta fz_delta(const GenericSystem& sys, double t, double z, double fd_step = 1e-5);

struct CounterexampleOptions {
    double z_star = 1.0;
    /// Empty range selects one real period of P(t; g2t, g3t).
    Interval t_range{0.0, 0.0};
    int n_t = 201;
    double fd_step = 1e-5;
    /// Ratio max|Delta| / max(curve_residual, noise) required for a violation.
    double ratio = 1e3;
    /// Points this close (in t) to a pole of f are masked.
    double pole_mask_radius = 1e-3;
    /// Hold f0(z) fixed at its value at z_star instead of following the
    /// root of R2(., z).
    bool freeze_f0 = false;
};

struct CounterexampleSample {
    double t;
    double delta;
    double delta_imag;
    double curve_residual;
    double noise;
    bool masked;
};

struct CounterexampleResult {
    ResidualReport report; // stats of Delta; verdict fail = the f_z relation is violated
    bool reproduced = false;
    double max_delta = 0.0;
    double max_curve_residual = 0.0;
    double noise_floor = 0.0;
    double f0_star = 0.0;
    std::vector<CounterexampleSample> samples;
};

CounterexampleResult counterexample_run(const GenericSystem& sys, CounterexampleOptions opts = {});

/// Residuals at z of the integrability conditions, with d = sqrt(h),
/// phi_z = c1 - 2a h and b = (2c2 - 2c1 h + 3a h^2) / 4:
///   phase:        phi_zz + 4a d d_z
///   phase_no_a:   phi_zz + 4 d d_z   (the variant without the factor a)
///   amplitude_b:  b_z + d d_z (phi_z - a d^2)
///   amplitude_d:  d (4ab + (phi_z - a d^2)^2) + d_zz
struct FrobeniusResiduals {
    double phase = 0.0;
    double phase_no_a = 0.0;
    double amplitude_b = 0.0;
    double amplitude_d = 0.0;
};

FrobeniusResiduals frobenius_residuals(const CnlseParams& p, const std::function<double(double)>& h,
                                       double z, double fd_step = 1e-4);

/// Max of each residual over grid_z (points where h <= 0 or near a pole of h
/// are masked).  Checks are named phase, phase_without_a, b_equation and
/// d_equation; verdict pass iff all but phase_without_a are < tolerance.
ResidualReport frobenius_check(const CnlseParams& p, const std::function<double(double)>& h,
                               const std::vector<double>& grid_z, double tolerance = 1e-5,
                               const std::function<double(double)>& pole_distance = {});

struct FrobeniusComparison {
    ResidualReport printed;
    ResidualReport derived;
    /// The conventions whose h satisfies the conditions.
    std::vector<Convention> passing;
};

/// Runs frobenius_check on h_solution under both conventions.
FrobeniusComparison frobenius_compare(const CnlseParams& p, const GenericConfig& cfg,
                                      const std::vector<double>& grid_z, double tolerance = 1e-5);

} // namespace cnlse
