#include "cnlse/report.hpp"

#include <cmath>
#include <limits>

namespace cnlse {

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass:
        return "pass";
    case Verdict::Fail:
        return "fail";
    case Verdict::Inconclusive:
        return "inconclusive";
    }
    return "inconclusive";
}

double ResidualReport::masked_fraction() const {
    return n_points == 0 ? 0.0 : static_cast<double>(n_masked) / static_cast<double>(n_points);
}

Verdict decide(double max_abs, double masked_fraction, double tolerance, double violation_floor,
               bool non_finite) {
    // No verdict is issued when most of the grid was masked.
    if (masked_fraction >= 0.5) {
        return Verdict::Inconclusive;
    }
    if (non_finite || !std::isfinite(max_abs) || max_abs > violation_floor) {
        return Verdict::Fail;
    }
    if (max_abs < tolerance) {
        return Verdict::Pass;
    }
    return Verdict::Inconclusive;
}

void ResidualAccumulator::add(double residual) {
    if (!std::isfinite(residual)) {
        non_finite_ = true;
        ++n_used_;
        return;
    }
    const double a = std::abs(residual);
    if (a > max_abs_) {
        max_abs_ = a;
    }
    sum_sq_ += a * a;
    ++n_used_;
}

ResidualReport ResidualAccumulator::finish(double tolerance, double violation_floor) const {
    ResidualReport r;
    r.n_points = n_used_ + n_masked_;
    r.n_masked = n_masked_;
    r.max_abs = non_finite_ ? std::numeric_limits<double>::infinity() : max_abs_;
    r.l2 = n_used_ > 0 ? std::sqrt(sum_sq_ / static_cast<double>(n_used_)) : 0.0;
    r.tolerance = tolerance;
    r.violation_floor = violation_floor;
    r.verdict = n_used_ == 0 && n_masked_ > 0
                    ? Verdict::Inconclusive
                    : decide(r.max_abs, r.masked_fraction(), tolerance, violation_floor, non_finite_);
    if (non_finite_) {
        r.notes.push_back("non-finite residual encountered");
    }
    return r;
}

} // namespace cnlse
