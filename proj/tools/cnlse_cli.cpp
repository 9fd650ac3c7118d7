// Command-line front end: every subcommand maps onto one RunConfig.command.

#include "cnlse/commands.hpp"
#include "cnlse/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

struct Overrides {
    std::string config_path;
    std::optional<double> a, c1, c2, c3, c0, h0, f0, z_star, tolerance;
    std::optional<std::string> family, amplitude, convention, scheme, out, prefix, variant_c;
    std::optional<int> n_t, n_z;
    bool freeze_f0 = false;
    bool relative = false;
    bool dump_config = false;
    bool quiet = false;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config_path, "JSON configuration file");
    sub->add_option("--a", o.a, "nonlinearity a");
    sub->add_option("--c1", o.c1, "integration constant c1");
    sub->add_option("--c2", o.c2, "integration constant c2");
    sub->add_option("--c3", o.c3, "integration constant c3");
    sub->add_option("--c0", o.c0, "phase offset c0");
    sub->add_option("--family", o.family,
                    "generic|g1|g+|g-|constant-k|sech|tanh|ft0");
    sub->add_option("--amplitude", o.amplitude, "signed|nonneg");
    sub->add_option("--convention", o.convention, "printed|derived");
    sub->add_option("--scheme", o.scheme, "analytic|finite_difference");
    sub->add_option("--tolerance", o.tolerance, "residual tolerance (0 = scheme default)");
    sub->add_flag("--relative", o.relative, "relative CNLSE residual");
    sub->add_option("--h0", o.h0, "h(0) of the generic construction");
    sub->add_option("--f0", o.f0, "target value for f0 (root of R2 nearest it)");
    sub->add_option("--z-star", o.z_star, "z of the counterexample sweep");
    sub->add_flag("--freeze-f0", o.freeze_f0, "hold f0(z) at its z* value");
    sub->add_option("--n-t", o.n_t, "grid points in t (samples of the sweep for counterexample)");
    sub->add_option("--n-z", o.n_z, "grid points in z");
    sub->add_option("--variant-c", o.variant_c, "figure 3 panel (c): sign_corrected|printed|exact");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--prefix", o.prefix, "output file name prefix");
    sub->add_flag("--dump-config", o.dump_config, "print the effective configuration and exit");
    sub->add_flag("-q,--quiet", o.quiet, "do not print the report");
}

cnlse::RunConfig build_config(const std::string& command, const Overrides& o, int figure) {
    cnlse::RunConfig c;
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) {
            throw cnlse::ConfigError("--config", "cannot read " + o.config_path);
        }
        std::stringstream ss;
        ss << in.rdbuf();
        c = cnlse::parse_config(ss.str());
    }
    c.command = command;
    if (figure > 0) {
        c.figure.which = figure;
    }
    if (o.a) c.a = *o.a;
    if (o.c1) c.c1 = *o.c1;
    if (o.c2) c.c2 = *o.c2;
    if (o.c3) c.c3 = *o.c3;
    if (o.c0) c.c0 = *o.c0;
    if (o.h0) c.h0 = *o.h0;
    if (o.f0) c.f0_value = *o.f0;
    if (o.z_star) c.counterexample.z_star = *o.z_star;
    if (o.tolerance) c.tolerance = *o.tolerance;
    if (o.family) c.family = *o.family;
    if (o.amplitude) c.amplitude = *o.amplitude;
    if (o.convention) c.convention = *o.convention;
    if (o.scheme) c.scheme = *o.scheme;
    if (o.out) c.output.dir = *o.out;
    if (o.prefix) c.output.prefix = *o.prefix;
    if (o.variant_c) c.figure.variant_c = *o.variant_c;
    if (o.n_t) {
        (command == "counterexample" ? c.counterexample.n_t : c.grid.n_t) = *o.n_t;
    }
    if (o.n_z) c.grid.n_z = *o.n_z;
    if (o.freeze_f0) c.counterexample.freeze_f0 = true;
    if (o.relative) c.relative = true;
    cnlse::validate_config(c);
    return c;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Elliptic-function solution families of the cubic NLS equation"};
    app.require_subcommand(1);
    Overrides o;
    int figure = 0;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"wp", "evaluate P and P' on a grid"},
        {"solve-quartic", "solve (y')^2 = R(y) with the Weierstrass formula"},
        {"build", "sample Psi of a solution family"},
        {"verify", "CNLSE residual of a solution family"},
        {"counterexample", "f_z test of the generic construction (exit 0 = violation found)"},
        {"classify", "constraint case and boundedness of the k = 0 families"},
        {"audit", "printed-formula and compatibility audit"},
        {"figure", "emit figure data: 1, 2 or 3"},
    };
    for (const auto& [name, help] : commands) {
        CLI::App* sub = app.add_subcommand(name, help);
        add_common(sub, o);
        if (name == "figure") {
            sub->add_option("which", figure, "figure number")->required()->check(CLI::Range(1, 3));
        }
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cnlse::exit_invalid;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const cnlse::RunConfig cfg = build_config(command, o, figure);
        if (o.dump_config) {
            std::cout << cnlse::serialize_config(cfg);
            return cnlse::exit_ok;
        }
        const cnlse::CommandResult r = cnlse::run_command(cfg);
        if (!o.quiet) {
            std::cout << r.report;
        }
        return r.exit_code;
    } catch (const cnlse::ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return cnlse::exit_invalid;
    } catch (const cnlse::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cnlse::exit_invalid;
    }
}
