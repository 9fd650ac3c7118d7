#include "cnlse/verifier.hpp"

#include "cnlse/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cnlse {

void GridSpec::validate() const {
    if (!(t.hi > t.lo) || !(z.hi > z.lo)) {
        throw DomainError("grid: ranges must be non-degenerate (lo < hi)");
    }
    if (n_t < 9 || n_z < 9) {
        throw DomainError("grid: at least 9 points per axis");
    }
    if (!(pole_mask_radius > 0.0)) {
        throw DomainError("grid: pole_mask_radius must be positive");
    }
}

double GridSpec::t_at(int i) const {
    return t.lo + (t.hi - t.lo) * i / (n_t - 1);
}

double GridSpec::z_at(int j) const {
    return z.lo + (z.hi - z.lo) * j / (n_z - 1);
}

std::string to_string(Scheme s) {
    return s == Scheme::Analytic ? "analytic" : "finite_difference";
}

Scheme parse_scheme(const std::string& s) {
    if (s == "analytic") {
        return Scheme::Analytic;
    }
    if (s == "finite_difference" || s == "fd") {
        return Scheme::FiniteDifference;
    }
    throw DomainError("unknown scheme '" + s + "' (expected analytic|finite_difference)");
}

namespace {

PsiJet fd_jet(const PsiEvaluator& psi, double t, double z, double ht, double hz) {
    PsiJet j;
    j.psi = psi(t, z);
    const complex tp1 = psi(t + ht, z), tm1 = psi(t - ht, z);
    const complex tp2 = psi(t + 2.0 * ht, z), tm2 = psi(t - 2.0 * ht, z);
    j.psi_t = (-tp2 + 8.0 * tp1 - 8.0 * tm1 + tm2) / (12.0 * ht);
    j.psi_tt = (-tp2 + 16.0 * tp1 - 30.0 * j.psi + 16.0 * tm1 - tm2) / (12.0 * ht * ht);
    const complex zp1 = psi(t, z + hz), zm1 = psi(t, z - hz);
    const complex zp2 = psi(t, z + 2.0 * hz), zm2 = psi(t, z - 2.0 * hz);
    j.psi_z = (-zp2 + 8.0 * zp1 - 8.0 * zm1 + zm2) / (12.0 * hz);
    return j;
}

template <class F>
double second_derivative(const F& f, double x, double h) {
    return (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) /
           (12.0 * h * h);
}

} // namespace

ResidualReport cnlse_residual(const PsiEvaluator& psi, double a, const GridSpec& grid,
                              Scheme scheme, CnlseResidualOptions opts) {
    grid.validate();
    const double tol = opts.tolerance > 0.0 ? opts.tolerance
                       : scheme == Scheme::Analytic ? 1e-6
                                                    : 1e-4;
    const double floor = opts.violation_floor > 0.0 ? opts.violation_floor : tol;
    ResidualAccumulator acc;
    std::size_t fallbacks = 0;
    std::size_t domain_errors = 0;
    for (int i = 0; i < grid.n_t; ++i) {
        const double t = grid.t_at(i);
        for (int j = 0; j < grid.n_z; ++j) {
            const double z = grid.z_at(j);
            if (psi.singular_distance(t, z) < grid.pole_mask_radius) {
                acc.mask();
                continue;
            }
            try {
                PsiJet jet;
                std::optional<PsiJet> exact;
                if (scheme == Scheme::Analytic) {
                    exact = psi.jet(t, z);
                }
                if (exact) {
                    jet = *exact;
                } else {
                    if (scheme == Scheme::Analytic) {
                        ++fallbacks;
                    }
                    jet = fd_jet(psi, t, z, opts.fd_step_t, opts.fd_step_z);
                }
                const complex r = complex(0.0, 1.0) * jet.psi_z + jet.psi_tt +
                                  a * jet.psi * std::norm(jet.psi);
                double v = std::abs(r);
                if (opts.relative) {
                    v /= 1.0 + std::abs(jet.psi_z) + std::abs(jet.psi_tt) +
                         std::abs(a) * std::pow(std::abs(jet.psi), 3);
                }
                acc.add(v);
            } catch (const PoleProximity&) {
                acc.mask();
            } catch (const Error&) {
                ++domain_errors;
                acc.add(std::numeric_limits<double>::quiet_NaN());
            }
        }
    }
    ResidualReport rep = acc.finish(tol, floor);
    rep.notes.push_back(std::string("scheme ") + to_string(scheme) +
                        (opts.relative ? ", relative residual" : ", absolute residual"));
    if (fallbacks > 0) {
        rep.notes.push_back(std::to_string(fallbacks) +
                            " points used finite differences (no closed-form derivative there)");
    }
    if (domain_errors > 0) {
        rep.notes.push_back(std::to_string(domain_errors) + " points outside the family's domain");
    }
    return rep;
}

std::vector<RealRoot> f0_roots(const CnlseParams& p, double h_at_z, double h_z_at_z,
                               Convention conv) {
    return real_roots(as_polynomial(r2_coefficients(p, h_at_z, h_z_at_z, conv)));
}

FzDelta fz_delta(const GenericSystem& sys, double t, double z, double fd_step) {
    const CnlseParams& p = sys.params();
    const double h = sys.h(z);
    if (h < 0.0) {
        throw DomainError("fz_delta: h(z) < 0");
    }
    const SolutionCurve fc = sys.f_curve(z);
    const CurveJet fj = fc.jet(t);
    auto central = [&](double step) {
        return (sys.f_complex(t, z + step) - sys.f_complex(t, z - step)) / (2.0 * step);
    };
    const complex d1 = central(fd_step);
    const complex d2 = central(fd_step / 2.0);
    const complex rich = (4.0 * d2 - d1) / 3.0;
    const complex delta = rich - std::sqrt(h) * (p.c1 - 3.0 * p.a * h - p.a * fj.y * fj.y);

    FzDelta out;
    out.f = fj.y;
    out.f_z = rich.real();
    out.noise = std::abs(rich - d2) + 10.0 * std::numeric_limits<double>::epsilon() *
                                          std::max(1.0, std::abs(fj.y)) / (fd_step / 2.0);
    out.delta = delta.real();
    out.delta_imag = delta.imag();
    out.curve_residual = fj.dy * fj.dy - eval_R(fc.coefficients(), fj.y).r;
    return out;
}

CounterexampleResult counterexample_run(const GenericSystem& input, CounterexampleOptions opts) {
    CounterexampleResult out;
    const GenericSystem sys =
        opts.freeze_f0 ? input.with_f0({F0Rule::Kind::Explicit, input.f0(opts.z_star)}) : input;
    Interval range = opts.t_range;
    if (!(range.hi > range.lo)) {
        const double period = sys.wp_t().real_period();
        range = {0.0, std::isfinite(period) ? period : 20.0};
    }
    const SolutionCurve fc = sys.f_curve(opts.z_star);
    out.f0_star = fc.y0();

    std::vector<double> deltas;
    std::size_t errors = 0;
    for (int i = 0; i < opts.n_t; ++i) {
        // Cell midpoints keep the samples off the lattice points of P.
        const double t = range.lo + (range.hi - range.lo) * (i + 0.5) / opts.n_t;
        CounterexampleSample s{t, 0.0, 0.0, 0.0, 0.0, false};
        if (fc.pole_distance(t) < opts.pole_mask_radius) {
            s.masked = true;
            out.samples.push_back(s);
            continue;
        }
        try {
            const FzDelta d = fz_delta(sys, t, opts.z_star, opts.fd_step);
            s.delta = d.delta;
            s.delta_imag = d.delta_imag;
            s.curve_residual = d.curve_residual;
            s.noise = d.noise;
            out.max_delta = std::max(out.max_delta, std::hypot(d.delta, d.delta_imag));
            out.max_curve_residual = std::max(out.max_curve_residual, std::abs(d.curve_residual));
            out.noise_floor = std::max(out.noise_floor, d.noise);
        } catch (const Error&) {
            s.masked = true;
            ++errors;
        }
        out.samples.push_back(s);
    }

    ResidualAccumulator acc;
    for (const CounterexampleSample& s : out.samples) {
        if (s.masked) {
            acc.mask();
        } else {
            acc.add(std::hypot(s.delta, s.delta_imag));
        }
    }
    const double base =
        std::max({out.max_curve_residual, out.noise_floor, std::numeric_limits<double>::min()});
    out.reproduced = out.max_delta > opts.ratio * base;
    out.report = acc.finish(10.0 * base, opts.ratio * base);
    out.report.checks.push_back(
        {"max_curve_residual", out.max_curve_residual, 1e-6, out.max_curve_residual < 1e-6, "f_t^2 - R2(f, z*)"});
    out.report.checks.push_back(
        {"fd_noise_floor", out.noise_floor, 0.0, true, "Richardson correction + rounding of f_z"});
    out.report.checks.push_back({"ratio", out.max_delta / base, opts.ratio, out.reproduced,
                                 "max|Delta| / max(curve_residual, noise)"});
    out.report.notes.push_back(opts.freeze_f0 ? "f0 held fixed at its z_star value"
                                              : "f0(z) follows the root of R2(., z)");
    out.report.notes.push_back(out.reproduced ? "f_z relation violated: counterexample reproduced"
                                              : "f_z relation holds to the noise floor");
    if (errors > 0) {
        out.report.notes.push_back(std::to_string(errors) + " samples failed to evaluate");
    }
    return out;
}

FrobeniusResiduals frobenius_residuals(const CnlseParams& p, const std::function<double(double)>& h,
                                       double z, double fd_step) {
    auto d = [&](double s) {
        const double v = h(s);
        if (v < 0.0) {
            throw DomainError("frobenius: h < 0");
        }
        return std::sqrt(v);
    };
    auto phi_z = [&](double s) { return p.c1 - 2.0 * p.a * h(s); };
    auto b = [&](double s) {
        const double v = h(s);
        return (2.0 * p.c2 - 2.0 * p.c1 * v + 3.0 * p.a * v * v) / 4.0;
    };
    const double dv = d(z);
    const double dz = central_derivative(d, z, fd_step);
    const double dzz = second_derivative(d, z, fd_step);
    const double phizz = central_derivative(phi_z, z, fd_step);
    const double bz = central_derivative(b, z, fd_step);
    const double w = phi_z(z) - p.a * dv * dv;

    FrobeniusResiduals r;
    r.phase = phizz + 4.0 * p.a * dv * dz;
    r.phase_no_a = phizz + 4.0 * dv * dz;
    r.amplitude_b = bz + dv * dz * w;
    r.amplitude_d = dv * (4.0 * p.a * b(z) + w * w) + dzz;
    return r;
}

ResidualReport frobenius_check(const CnlseParams& p, const std::function<double(double)>& h,
                               const std::vector<double>& grid_z, double tolerance,
                               const std::function<double(double)>& pole_distance) {
    ResidualAccumulator acc;
    double m_phase = 0.0, m_phase_no_a = 0.0, m_b = 0.0, m_d = 0.0;
    std::size_t non_finite = 0;
    for (double z : grid_z) {
        if (pole_distance && pole_distance(z) < 0.05) {
            acc.mask();
            continue;
        }
        try {
            const FrobeniusResiduals r = frobenius_residuals(p, h, z);
            if (!std::isfinite(r.phase) || !std::isfinite(r.amplitude_b) || !std::isfinite(r.amplitude_d)) {
                ++non_finite;
            }
            m_phase = std::max(m_phase, std::abs(r.phase));
            m_phase_no_a = std::max(m_phase_no_a, std::abs(r.phase_no_a));
            m_b = std::max(m_b, std::abs(r.amplitude_b));
            m_d = std::max(m_d, std::abs(r.amplitude_d));
            acc.add(std::max({std::abs(r.phase), std::abs(r.amplitude_b), std::abs(r.amplitude_d)}));
        } catch (const Error&) {
            acc.mask();
        }
    }
    ResidualReport rep = acc.finish(tolerance);
    rep.checks.push_back({"phase", m_phase, tolerance, m_phase < tolerance, "phi_zz + 4 a d d_z"});
    rep.checks.push_back(
        {"phase_without_a", m_phase_no_a, tolerance, m_phase_no_a < tolerance, "phi_zz + 4 d d_z (no factor a)"});
    rep.checks.push_back({"b_equation", m_b, tolerance, m_b < tolerance, "b_z + d d_z (phi_z - a d^2)"});
    rep.checks.push_back(
        {"d_equation", m_d, tolerance, m_d < tolerance, "d (4ab + (phi_z - a d^2)^2) + d_zz"});
    if (non_finite > 0) {
        rep.notes.push_back(std::to_string(non_finite) + " non-finite residuals");
    }
    return rep;
}

FrobeniusComparison frobenius_compare(const CnlseParams& p, const GenericConfig& cfg,
                                      const std::vector<double>& grid_z, double tolerance) {
    FrobeniusComparison out;
    for (Convention conv : {Convention::Printed, Convention::Derived}) {
        const SolutionCurve hc(r1_coefficients(p, conv), cfg.h0, cfg.h_branch, CurveMode::Real);
        ResidualReport rep = frobenius_check(
            p, [&](double z) { return hc(z); }, grid_z, tolerance,
            [&](double z) { return hc.pole_distance(z); });
        rep.notes.push_back("h from the " + to_string(conv) + " R1");
        if (rep.passed()) {
            out.passing.push_back(conv);
        }
        (conv == Convention::Printed ? out.printed : out.derived) = std::move(rep);
    }
    return out;
}

} // namespace cnlse
