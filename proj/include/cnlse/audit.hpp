#pragma once

#include "cnlse/model.hpp"
#include "cnlse/verifier.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cnlse {

/// One comparison of the audit.  `reference` is the value computed from first
/// principles (standard invariants, the generic Weierstrass formula, ...);
/// `printed` is the value of the published expression or the alternative it is
/// compared against.  magnitude is |reference - printed| / max(1, |reference|),
/// or the item's own statistic for property checks.
struct AuditItem {
    std::string name;
    std::string kind; // invariant | transcription | convention | property
    double reference = 0.0;
    double printed = 0.0;
    double magnitude = 0.0;
    double tolerance = 0.0;
    bool matches = false;
    std::string detail;
};

struct AuditOptions {
    double z_ref = 1.0;
    /// z values for the invariants of R2 along h(z).
    int n_z = 20;
    Interval z_range{0.2, 2.0};
    /// Tolerance for the invariant and transcription comparisons.
    double tolerance = 1e-10;
    double z_spread_tolerance = 1e-8;
    double period_tolerance = 1e-8;
    double frobenius_tolerance = 1e-5;
    GenericConfig generic;
};

struct AuditReport {
    std::vector<AuditItem> items;
    FrobeniusComparison frobenius;
    /// The R1 convention satisfying the compatibility conditions, when exactly
    /// one does.
    std::optional<Convention> frobenius_convention;

    const AuditItem* find(const std::string& name) const;
};

/// Printed closed form of h(z) for h(0) = h0 (the + sign in front of P'),
/// evaluated with the invariants of R1.
double printed_h_formula(const QuarticCoefficients& R1, double h0, const WeierstrassP& wp,
                         double z);

/// Printed closed form of f(t) for f(0) = f0 with beta2 = 0.
double printed_f_formula(const QuarticCoefficients& R2, double f0, const WeierstrassP& wp,
                         double t);

AuditReport consistency_audit(const CnlseParams& p, const AuditOptions& opts = {});

} // namespace cnlse
