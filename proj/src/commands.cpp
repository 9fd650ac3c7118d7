#include "cnlse/commands.hpp"

#include "cnlse/audit.hpp"
#include "cnlse/classifier.hpp"
#include "cnlse/errors.hpp"
#include "cnlse/nongeneric.hpp"
#include "cnlse/polynomial.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

namespace cnlse {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<Figure3Panel> figure3_panels(const std::string& variant_c) {
    std::vector<Figure3Panel> out;
    out.push_back({"a", CnlseParams(-0.125, -1.0, 1.0), FamilyTag::GPlus});
    out.push_back({"b", CnlseParams(1.0, 1.0, 0.0), FamilyTag::GPlus});
    if (variant_c == "printed") {
        out.push_back({"c", CnlseParams(0.46, -1.92, 2.0), FamilyTag::G1});
    } else if (variant_c == "exact") {
        out.push_back({"c", CnlseParams(-0.46, -1.92, 1.92 * 1.92 / (4.0 * 0.46)), FamilyTag::G1});
    } else {
        out.push_back({"c", CnlseParams(-0.46, -1.92, 2.0), FamilyTag::G1});
    }
    return out;
}

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

/// CSV with a fixed header; every number printed with 17 significant digits.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) {
            throw ConfigError("output.dir", "cannot open " + path + " for writing");
        }
        for (std::size_t i = 0; i < header.size(); ++i) {
            out_ << (i ? "," : "") << header[i];
        }
        out_ << '\n';
    }

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            out_ << (first ? "" : ",") << format_number(v);
            first = false;
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

/// Doubles that are not finite as strings (JSON has no nan/inf).
ordered_json num(double v) {
    if (std::isfinite(v)) {
        return v;
    }
    return format_number(v);
}

ordered_json params_json(const RunConfig& c) {
    return {{"a", c.a}, {"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3}, {"c0", c.c0}};
}

ordered_json params_json(const CnlseParams& p) {
    return {{"a", p.a}, {"c1", p.c1}, {"c2", p.c2}, {"c3", p.c3}, {"c0", p.c0}};
}

ordered_json checks_json(const std::vector<CheckResult>& checks) {
    ordered_json arr = ordered_json::array();
    for (const CheckResult& c : checks) {
        arr.push_back({{"name", c.name},
                       {"value", num(c.value)},
                       {"tolerance", num(c.tolerance)},
                       {"passed", c.passed},
                       {"detail", c.detail}});
    }
    return arr;
}

/// Report skeleton: {command, params, convention, verdict, max_abs, l2, n_masked, notes}.
ordered_json base_report(const RunConfig& cfg, const ResidualReport& r) {
    ordered_json j;
    j["command"] = cfg.command == "figure" ? "figure " + std::to_string(cfg.figure.which)
                                           : cfg.command;
    j["params"] = params_json(cfg);
    j["convention"] = cfg.convention;
    j["verdict"] = to_string(r.verdict);
    j["max_abs"] = num(r.max_abs);
    j["l2"] = num(r.l2);
    j["n_masked"] = r.n_masked;
    j["notes"] = r.notes;
    j["n_points"] = r.n_points;
    j["tolerance"] = num(r.tolerance);
    j["violation_floor"] = num(r.violation_floor);
    j["checks"] = checks_json(r.checks);
    return j;
}

struct Context {
    const RunConfig& cfg;
    std::vector<std::string> files;

    std::string path(const std::string& name) {
        std::filesystem::create_directories(cfg.output.dir);
        const std::string p =
            (std::filesystem::path(cfg.output.dir) / (cfg.output.prefix + name)).string();
        files.push_back(p);
        return p;
    }
};

int verdict_exit(Verdict v) {
    return v == Verdict::Pass ? exit_ok : exit_violation;
}

std::vector<double> linspace(Interval r, int n) {
    std::vector<double> xs;
    for (int i = 0; i < n; ++i) {
        xs.push_back(n == 1 ? r.lo : r.lo + (r.hi - r.lo) * i / (n - 1));
    }
    return xs;
}

CnlseResidualOptions residual_options(const RunConfig& cfg) {
    CnlseResidualOptions o;
    o.tolerance = cfg.tolerance;
    o.violation_floor = cfg.violation_floor;
    o.relative = cfg.relative;
    return o;
}

void write_psi_table(Context& ctx, const std::string& name, const PsiEvaluator& psi,
                     const GridSpec& grid) {
    CsvWriter csv(ctx.path(name), {"t", "z", "re_psi", "im_psi", "abs2"});
    for (int i = 0; i < grid.n_t; ++i) {
        const double t = grid.t_at(i);
        for (int j = 0; j < grid.n_z; ++j) {
            const double z = grid.z_at(j);
            complex v(nan, nan);
            if (psi.singular_distance(t, z) >= grid.pole_mask_radius) {
                try {
                    v = psi(t, z);
                } catch (const PoleProximity&) {
                }
            }
            csv.row({t, z, v.real(), v.imag(), std::norm(v)});
        }
    }
}

// ---------------------------------------------------------------- commands

int cmd_wp(Context& ctx, ordered_json& rep) {
    const WpGridConfig& w = ctx.cfg.wp;
    const WeierstrassP wp({w.g2, w.g3});
    CsvWriter csv(ctx.path("wp.csv"),
                  {"re", "im", "wp_re", "wp_im", "wp_prime_re", "wp_prime_im", "identity_residual"});
    ResidualAccumulator acc;
    for (double x : linspace(w.re, w.n_re)) {
        for (double y : linspace(w.im, w.n_im)) {
            try {
                const WpValue v = wp(complex(x, y));
                const complex id = v.wp_prime * v.wp_prime -
                                   (4.0 * v.wp * v.wp * v.wp - w.g2 * v.wp - w.g3);
                const double r = std::abs(id) / (1.0 + std::pow(std::abs(v.wp), 3));
                acc.add(r);
                csv.row({x, y, v.wp.real(), v.wp.imag(), v.wp_prime.real(), v.wp_prime.imag(), r});
            } catch (const PoleProximity&) {
                acc.mask();
                csv.row({x, y, nan, nan, nan, nan, nan});
            }
        }
    }
    ResidualReport r = acc.finish(1e-9);
    r.notes.push_back("identity residual |P'^2 - (4P^3 - g2 P - g3)| / (1 + |P|^3)");
    const LatticeData lat = real_half_period({w.g2, w.g3});
    r.checks.push_back({"discriminant", discriminant({w.g2, w.g3}), 0.0, true, ""});
    r.checks.push_back({"omega_real", lat.omega_real, 0.0, true,
                        lat.degenerate ? "degenerate lattice" : ""});
    rep = base_report(ctx.cfg, r);
    rep["invariants"] = {{"g2", w.g2}, {"g3", w.g3}};
    return verdict_exit(r.verdict);
}

int cmd_solve_quartic(Context& ctx, ordered_json& rep) {
    const QuarticConfig& q = ctx.cfg.quartic;
    const QuarticCoefficients R{q.coefficients[0], q.coefficients[1], q.coefficients[2],
                                q.coefficients[3], q.coefficients[4]};
    const SolutionCurve curve = weierstrass_solution(R, q.y0, q.branch);
    const std::vector<double> xs = linspace(q.x, q.n);
    CsvWriter csv(ctx.path("solve-quartic.csv"), {"x", "y", "dy"});
    for (double x : xs) {
        try {
            const CurveJet j = curve.jet(x);
            csv.row({x, j.y, j.dy});
        } catch (const PoleProximity&) {
            csv.row({x, nan, nan});
        }
    }
    ResidualReport r = ode_residual(curve, xs);
    const EllipticInvariants inv = curve.invariants();
    r.checks.push_back({"g2", inv.g2, 0.0, true, "invariant of R"});
    r.checks.push_back({"g3", inv.g3, 0.0, true, "invariant of R"});
    for (const RealRoot& root : real_roots(as_polynomial(R))) {
        r.checks.push_back({"root", root.value, 0.0, true,
                            "real root of R, multiplicity " + std::to_string(root.multiplicity)});
    }
    rep = base_report(ctx.cfg, r);
    return verdict_exit(r.verdict);
}

int cmd_build(Context& ctx, ordered_json& rep) {
    const PsiPtr psi = assemble_psi(ctx.cfg.params(), ctx.cfg.solution_family());
    write_psi_table(ctx, "build.csv", *psi, ctx.cfg.grid);
    ResidualReport r;
    r.verdict = Verdict::Pass;
    r.n_points = static_cast<std::size_t>(ctx.cfg.grid.n_t) * ctx.cfg.grid.n_z;
    r.notes.push_back("family " + psi->name() + " sampled on the grid");
    rep = base_report(ctx.cfg, r);
    rep["family"] = psi->name();
    return exit_ok;
}

int cmd_verify(Context& ctx, ordered_json& rep) {
    const CnlseParams p = ctx.cfg.params();
    const PsiPtr psi = assemble_psi(p, ctx.cfg.solution_family());
    const ResidualReport r = cnlse_residual(*psi, p.a, ctx.cfg.grid, parse_scheme(ctx.cfg.scheme),
                                            residual_options(ctx.cfg));
    rep = base_report(ctx.cfg, r);
    rep["family"] = psi->name();
    rep["scheme"] = ctx.cfg.scheme;
    if (auto ft = std::dynamic_pointer_cast<const Ft0Psi>(psi)) {
        double worst = 0.0;
        for (double z : linspace(ctx.cfg.grid.z, ctx.cfg.grid.n_z)) {
            const auto res = ft->system_residual(z);
            worst = std::max({worst, std::abs(res[0]), std::abs(res[1])});
        }
        rep["ft0_system_residual"] = num(worst);
    }
    return verdict_exit(r.verdict);
}

CounterexampleResult run_counterexample(const RunConfig& cfg) {
    const GenericSystem sys(cfg.params(), cfg.generic(), parse_convention(cfg.convention),
                            cfg.counterexample.z_star);
    return counterexample_run(sys, cfg.counterexample);
}

ordered_json counterexample_fields(const CounterexampleResult& r) {
    return {{"reproduced", r.reproduced},
            {"max_delta", num(r.max_delta)},
            {"max_curve_residual", num(r.max_curve_residual)},
            {"noise_floor", num(r.noise_floor)},
            {"f0_star", num(r.f0_star)}};
}

void write_counterexample_table(Context& ctx, const std::string& name,
                                const CounterexampleResult& r) {
    CsvWriter csv(ctx.path(name),
                  {"t", "delta", "curve_residual", "delta_imag", "noise", "masked"});
    for (const CounterexampleSample& s : r.samples) {
        if (s.masked) {
            csv.row({s.t, nan, nan, nan, nan, 1.0});
        } else {
            csv.row({s.t, s.delta, s.curve_residual, s.delta_imag, s.noise, 0.0});
        }
    }
}

int cmd_counterexample(Context& ctx, ordered_json& rep) {
    const CounterexampleResult r = run_counterexample(ctx.cfg);
    write_counterexample_table(ctx, "counterexample.csv", r);
    rep = base_report(ctx.cfg, r.report);
    rep["counterexample"] = counterexample_fields(r);
    // The expected outcome is a violation, so reproduction is success.
    return r.reproduced ? exit_ok : exit_violation;
}

ordered_json classify_json(const CnlseParams& p, int& exit_code) {
    const ConstraintCase c = constraint_case(p);
    ordered_json j;
    j["case"] = to_string(c.tag);
    j["witnesses"] = {{"sign_a", c.sign_a},
                      {"sign_c1", c.sign_c1},
                      {"sign_c2", c.sign_c2},
                      {"discriminant", c.discriminant},
                      {"tolerance", c.tolerance}};
    const double rel = std::abs(c.discriminant) / std::max(p.c1 * p.c1, std::abs(4.0 * p.a * p.c2));
    j["relative_discriminant"] = num(rel);
    if (c.tag != CaseTag::C && c.tag != CaseTag::None && p.a < 0.0 && p.c1 < 0.0 && rel < 1e-2) {
        j["near_degenerate"] = "near case C: |c1^2 + 4ac2| / max(c1^2, |4ac2|) = " + format_number(rel);
    } else if (c.tag != CaseTag::B && p.a > 0.0 && p.c1 > 0.0 &&
               std::abs(4.0 * p.a * p.c2) < 1e-2 * p.c1 * p.c1) {
        j["near_degenerate"] = "near case B: |4ac2| / c1^2 = " +
                               format_number(std::abs(4.0 * p.a * p.c2) / (p.c1 * p.c1));
    }
    ordered_json measured;
    BoundednessVerdict m;
    bool have_measured = true;
    try {
        const CnlseParams p0(p.a, p.c1, p.c2, 0.0, p.c0);
        m = measured_verdict(p0);
        measured = {{"g1", to_string(m.g1)}, {"g+", to_string(m.g_plus)}, {"g-", to_string(m.g_minus)}};
    } catch (const Error& e) {
        have_measured = false;
        measured = e.what();
    }
    j["measured"] = measured;
    if (c.tag == CaseTag::None) {
        j["expected"] = nullptr;
        j["agrees"] = nullptr;
    } else {
        const BoundednessVerdict e = expected_boundedness(c);
        j["expected"] = {{"g1", to_string(e.g1)}, {"g+", to_string(e.g_plus)}, {"g-", to_string(e.g_minus)}};
        const bool agrees = have_measured && e == m;
        j["agrees"] = agrees;
        if (!agrees) {
            exit_code = exit_violation;
        }
        if (c.tag == CaseTag::E && have_measured) {
            try {
                const ShiftMatch s = shift_equivalence(CnlseParams(p.a, p.c1, p.c2));
                j["shift_equivalence"] = {{"shift", s.shift}, {"max_diff", s.max_diff}};
            } catch (const Error& e) {
                j["shift_equivalence"] = e.what();
            }
        }
    }
    try {
        j["t_period"] = num(t_period(CnlseParams(p.a, p.c1, p.c2), FamilyTag::GPlus));
    } catch (const Error&) {
    }
    return j;
}

int cmd_classify(Context& ctx, ordered_json& rep) {
    int code = exit_ok;
    const ordered_json c = classify_json(ctx.cfg.params(), code);
    ResidualReport r;
    r.verdict = code == exit_ok ? Verdict::Pass : Verdict::Fail;
    if (ctx.cfg.c3 != 0.0) {
        r.notes.push_back("k = 0 families are evaluated with c3 = 0");
    }
    rep = base_report(ctx.cfg, r);
    rep["classification"] = c;
    return code;
}

int cmd_audit(Context& ctx, ordered_json& rep) {
    AuditOptions opts;
    opts.generic = ctx.cfg.generic();
    const AuditReport a = consistency_audit(ctx.cfg.params(), opts);
    ordered_json items = ordered_json::array();
    bool ok = true;
    std::size_t mismatches = 0;
    for (const AuditItem& it : a.items) {
        items.push_back({{"name", it.name},
                         {"kind", it.kind},
                         {"reference", num(it.reference)},
                         {"printed", num(it.printed)},
                         {"magnitude", num(it.magnitude)},
                         {"tolerance", num(it.tolerance)},
                         {"matches", it.matches},
                         {"detail", it.detail}});
        if (it.kind == "property") {
            // Properties must hold; an unevaluable one (nan) is not a failure.
            if (!it.matches && std::isfinite(it.magnitude)) {
                ok = false;
            }
        } else if (!it.matches) {
            ++mismatches;
        }
    }
    ResidualReport r;
    r.verdict = ok ? Verdict::Pass : Verdict::Fail;
    r.notes.push_back(std::to_string(mismatches) +
                      " printed-formula or convention comparisons differ (see items)");
    r.notes.push_back(a.frobenius_convention
                          ? "compatibility conditions hold for the " +
                                to_string(*a.frobenius_convention) + " R1 only"
                          : "compatibility conditions do not single out one R1 convention");
    rep = base_report(ctx.cfg, r);
    rep["items"] = items;
    rep["compatibility"] = {{"printed", checks_json(a.frobenius.printed.checks)},
                            {"derived", checks_json(a.frobenius.derived.checks)}};
    rep["compatibility_convention"] =
        a.frobenius_convention ? ordered_json(to_string(*a.frobenius_convention)) : ordered_json();
    return ok ? exit_ok : exit_violation;
}

int cmd_figure1(Context& ctx, ordered_json& rep) {
    const RunConfig& cfg = ctx.cfg;
    const CnlseParams p = cfg.params();
    const Convention conv = parse_convention(cfg.convention);
    const double z = cfg.counterexample.z_star;
    const GenericSystem sys(p, cfg.generic(), conv, z);
    const QuarticCoefficients R2 = sys.r2_at(z);
    const std::vector<RealRoot> roots = real_roots(as_polynomial(R2));
    Interval range{-3.0, 3.0};
    if (!roots.empty()) {
        const double lo = roots.front().value, hi = roots.back().value;
        const double pad = std::max(0.5, 0.25 * (hi - lo));
        range = {lo - pad, hi + pad};
    }
    CsvWriter csv(ctx.path("figure1.csv"), {"f0", "R2"});
    for (double f : linspace(range, cfg.figure.n_f0)) {
        csv.row({f, eval_R(R2, f).r});
    }
    ResidualReport r;
    r.verdict = Verdict::Pass;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        r.checks.push_back({"f0" + std::to_string(i + 1), roots[i].value, 0.0, true,
                            "root of R2(., z*), multiplicity " +
                                std::to_string(roots[i].multiplicity)});
    }
    r.notes.push_back("R2(f0, z*) at z* = " + format_number(z) + ", h(z*) = " +
                      format_number(sys.h(z)));
    rep = base_report(cfg, r);
    rep["f0_nearest"] = num(sys.f0(z));
    return exit_ok;
}

int cmd_figure2(Context& ctx, ordered_json& rep) {
    const CounterexampleResult r = run_counterexample(ctx.cfg);
    CsvWriter csv(ctx.path("figure2.csv"), {"t", "delta", "curve_residual"});
    for (const CounterexampleSample& s : r.samples) {
        if (s.masked) {
            csv.row({s.t, nan, nan});
        } else {
            csv.row({s.t, std::hypot(s.delta, s.delta_imag) * (s.delta < 0.0 ? -1.0 : 1.0),
                     s.curve_residual});
        }
    }
    rep = base_report(ctx.cfg, r.report);
    rep["counterexample"] = counterexample_fields(r);
    return exit_ok;
}

int cmd_figure3(Context& ctx, ordered_json& rep) {
    const RunConfig& cfg = ctx.cfg;
    ordered_json panels = ordered_json::array();
    ResidualReport total;
    total.verdict = Verdict::Pass;
    for (const Figure3Panel& panel : figure3_panels(cfg.figure.variant_c)) {
        SolutionFamily fam;
        fam.tag = panel.family;
        fam.amplitude = parse_amplitude(cfg.amplitude);
        const PsiPtr psi = assemble_psi(panel.params, fam);
        write_psi_table(ctx, "figure3" + panel.name + ".csv", *psi, cfg.grid);
        CnlseResidualOptions o;
        o.tolerance = 1e-4;
        const ResidualReport r =
            cnlse_residual(*psi, panel.params.a, cfg.grid, Scheme::FiniteDifference, o);
        int code = exit_ok;
        ordered_json cls = classify_json(panel.params, code);
        panels.push_back({{"panel", panel.name},
                          {"params", params_json(panel.params)},
                          {"family", to_string(panel.family)},
                          {"residual_fd_max", num(r.max_abs)},
                          {"n_masked", r.n_masked},
                          {"verdict", to_string(r.verdict)},
                          {"classification", cls}});
        total.checks.push_back({"panel_" + panel.name, r.max_abs, 1e-4, r.passed(),
                                to_string(panel.family)});
        total.max_abs = std::max(total.max_abs, r.max_abs);
        total.n_masked += r.n_masked;
        total.n_points += r.n_points;
        if (!r.passed()) {
            total.verdict = r.verdict;
        }
    }
    total.notes.push_back("panel (c) variant: " + cfg.figure.variant_c);
    rep = base_report(cfg, total);
    rep["params"] = nullptr;
    rep["panels"] = panels;
    return exit_ok;
}

} // namespace

CommandResult run_command(const RunConfig& cfg) {
    Context ctx{cfg, {}};
    ordered_json rep;
    CommandResult out;
    std::string name = cfg.command;
    try {
        validate_config(cfg);
        if (cfg.command == "wp") {
            out.exit_code = cmd_wp(ctx, rep);
        } else if (cfg.command == "solve-quartic") {
            out.exit_code = cmd_solve_quartic(ctx, rep);
        } else if (cfg.command == "build") {
            out.exit_code = cmd_build(ctx, rep);
        } else if (cfg.command == "verify") {
            out.exit_code = cmd_verify(ctx, rep);
        } else if (cfg.command == "counterexample") {
            out.exit_code = cmd_counterexample(ctx, rep);
        } else if (cfg.command == "classify") {
            out.exit_code = cmd_classify(ctx, rep);
        } else if (cfg.command == "audit") {
            out.exit_code = cmd_audit(ctx, rep);
        } else {
            name = "figure" + std::to_string(cfg.figure.which);
            switch (cfg.figure.which) {
            case 1:
                out.exit_code = cmd_figure1(ctx, rep);
                break;
            case 2:
                out.exit_code = cmd_figure2(ctx, rep);
                break;
            default:
                out.exit_code = cmd_figure3(ctx, rep);
                break;
            }
        }
    } catch (const ConfigError& e) {
        rep = {{"command", cfg.command}, {"verdict", "invalid"}, {"error", e.what()},
               {"key", e.key()}};
        out.exit_code = exit_invalid;
    } catch (const std::filesystem::filesystem_error& e) {
        rep = {{"command", cfg.command}, {"verdict", "invalid"}, {"error", e.what()},
               {"key", "output.dir"}};
        out.exit_code = exit_invalid;
        out.report = rep.dump(2) + "\n";
        return out;
    } catch (const Error& e) {
        rep = {{"command", cfg.command},
               {"params", params_json(cfg)},
               {"verdict", "invalid"},
               {"error", e.what()}};
        out.exit_code = exit_invalid;
    }
    out.report = rep.dump(2) + "\n";
    try {
        std::ofstream f(ctx.path(name + ".json"));
        f << out.report;
    } catch (const std::exception&) {
        // The report is still returned to the caller.
    }
    out.files = ctx.files;
    return out;
}

} // namespace cnlse
