#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cnlse {

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

/// One named item of a report (an audit entry, a sub-residual, ...).
struct CheckResult {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

struct ResidualReport {
    double max_abs = 0.0;
    double l2 = 0.0; // root mean square over unmasked points
    std::size_t n_points = 0;
    std::size_t n_masked = 0;
    Verdict verdict = Verdict::Inconclusive;
    double tolerance = 0.0;
    double violation_floor = 0.0;
    std::vector<CheckResult> checks;
    std::vector<std::string> notes;

    double masked_fraction() const;
    bool passed() const { return verdict == Verdict::Pass; }
};

/// Verdict rule shared by every residual.  Half or more of the points masked
/// gives inconclusive; otherwise fail iff max exceeds the violation floor (or a
/// value is not finite), pass iff max < tolerance, inconclusive in between.
Verdict decide(double max_abs, double masked_fraction, double tolerance, double violation_floor,
               bool non_finite = false);

/// Streams pointwise residuals into a report.
class ResidualAccumulator {
public:
    void add(double residual);
    void mask() { ++n_masked_; }
    ResidualReport finish(double tolerance, double violation_floor) const;
    ResidualReport finish(double tolerance) const { return finish(tolerance, tolerance); }

private:
    double max_abs_ = 0.0;
    double sum_sq_ = 0.0;
    std::size_t n_used_ = 0;
    std::size_t n_masked_ = 0;
    bool non_finite_ = false;
};

} // namespace cnlse
