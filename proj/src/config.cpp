#include "cnlse/config.hpp"

#include "cnlse/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace cnlse {

using nlohmann::json;

bool operator==(const Interval& x, const Interval& y) {
    return x.lo == y.lo && x.hi == y.hi;
}

bool operator==(const GridSpec& x, const GridSpec& y) {
    return x.t == y.t && x.z == y.z && x.n_t == y.n_t && x.n_z == y.n_z &&
           x.pole_mask_radius == y.pole_mask_radius;
}

bool operator==(const CounterexampleOptions& x, const CounterexampleOptions& y) {
    return x.z_star == y.z_star && x.t_range == y.t_range && x.n_t == y.n_t &&
           x.fd_step == y.fd_step && x.ratio == y.ratio &&
           x.pole_mask_radius == y.pole_mask_radius && x.freeze_f0 == y.freeze_f0;
}

bool operator==(const RunConfig& x, const RunConfig& y) {
    return x.command == y.command && x.a == y.a && x.c1 == y.c1 && x.c2 == y.c2 && x.c3 == y.c3 &&
           x.c0 == y.c0 && x.family == y.family && x.amplitude == y.amplitude &&
           x.convention == y.convention && x.h0 == y.h0 && x.f0_rule == y.f0_rule &&
           x.f0_value == y.f0_value && x.h_branch == y.h_branch && x.f_branch == y.f_branch &&
           x.grid == y.grid && x.scheme == y.scheme && x.tolerance == y.tolerance &&
           x.violation_floor == y.violation_floor && x.relative == y.relative &&
           x.counterexample == y.counterexample && x.wp == y.wp && x.quartic == y.quartic &&
           x.ft0 == y.ft0 && x.figure == y.figure && x.output == y.output;
}

GenericConfig RunConfig::generic() const {
    GenericConfig g;
    g.h0 = h0;
    g.f0.kind = f0_rule == "explicit" ? F0Rule::Kind::Explicit : F0Rule::Kind::NearestRoot;
    g.f0.value = f0_value;
    g.h_branch = h_branch;
    g.f_branch = f_branch;
    return g;
}

SolutionFamily RunConfig::solution_family() const {
    SolutionFamily f;
    f.tag = parse_family(family);
    f.amplitude = parse_amplitude(amplitude);
    f.convention = parse_convention(convention);
    f.generic = generic();
    if (f.tag == FamilyTag::FT0) {
        const Ft0Config ft = ft0;
        if (ft.profile == "constant") {
            f.ft0_f = [v = ft.value](double) { return v; };
            f.ft0_f_prime = [](double) { return 0.0; };
        } else {
            f.ft0_f = [v = ft.value, e = ft.epsilon](double z) { return v * std::sin(e * z); };
            f.ft0_f_prime = [v = ft.value, e = ft.epsilon](double z) {
                return v * e * std::cos(e * z);
            };
        }
        f.ft0_c = ft.c;
    }
    return f;
}

namespace {

/// Reads one JSON object, remembering which keys were consumed.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
        }
    }

    std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

    const json* get(const std::string& k) {
        seen_.insert(k);
        auto it = j_.find(k);
        return it == j_.end() ? nullptr : &*it;
    }

    void number(const std::string& k, double& out) {
        if (const json* v = get(k)) {
            if (!v->is_number()) {
                throw ConfigError(key(k), "expected a number");
            }
            out = v->get<double>();
        }
    }

    void integer(const std::string& k, int& out) {
        if (const json* v = get(k)) {
            if (!v->is_number_integer()) {
                throw ConfigError(key(k), "expected an integer");
            }
            out = v->get<int>();
        }
    }

    void text(const std::string& k, std::string& out) {
        if (const json* v = get(k)) {
            if (!v->is_string()) {
                throw ConfigError(key(k), "expected a string");
            }
            out = v->get<std::string>();
        }
    }

    void boolean(const std::string& k, bool& out) {
        if (const json* v = get(k)) {
            if (!v->is_boolean()) {
                throw ConfigError(key(k), "expected true or false");
            }
            out = v->get<bool>();
        }
    }

    void interval(const std::string& k, Interval& out) {
        if (const json* v = get(k)) {
            if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
                throw ConfigError(key(k), "expected [lo, hi]");
            }
            out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
        }
    }

    template <class F>
    void section(const std::string& k, F&& body) {
        if (const json* v = get(k)) {
            Reader sub(*v, key(k));
            body(sub);
            sub.finish();
        }
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) {
                throw ConfigError(key(it.key()), "unknown key");
            }
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

json interval_json(const Interval& i) {
    return json::array({i.lo, i.hi});
}

} // namespace

RunConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    RunConfig c;
    Reader r(root, "");
    r.text("command", c.command);
    r.section("params", [&](Reader& s) {
        s.number("a", c.a);
        s.number("c1", c.c1);
        s.number("c2", c.c2);
        s.number("c3", c.c3);
        s.number("c0", c.c0);
    });
    r.section("family", [&](Reader& s) {
        s.text("tag", c.family);
        s.text("amplitude", c.amplitude);
        s.section("ft0", [&](Reader& f) {
            f.text("profile", c.ft0.profile);
            f.number("value", c.ft0.value);
            f.number("epsilon", c.ft0.epsilon);
            f.number("c", c.ft0.c);
        });
    });
    r.text("convention", c.convention);
    r.section("generic", [&](Reader& s) {
        s.number("h0", c.h0);
        s.text("f0_rule", c.f0_rule);
        s.number("f0_value", c.f0_value);
        s.integer("h_branch", c.h_branch);
        s.integer("f_branch", c.f_branch);
    });
    r.section("grid", [&](Reader& s) {
        s.interval("t", c.grid.t);
        s.interval("z", c.grid.z);
        s.integer("n_t", c.grid.n_t);
        s.integer("n_z", c.grid.n_z);
        s.number("pole_mask_radius", c.grid.pole_mask_radius);
    });
    r.section("verify", [&](Reader& s) {
        s.text("scheme", c.scheme);
        s.number("tolerance", c.tolerance);
        s.number("violation_floor", c.violation_floor);
        s.boolean("relative", c.relative);
    });
    r.section("counterexample", [&](Reader& s) {
        s.number("z_star", c.counterexample.z_star);
        s.interval("t_range", c.counterexample.t_range);
        s.integer("n_t", c.counterexample.n_t);
        s.number("fd_step", c.counterexample.fd_step);
        s.number("ratio", c.counterexample.ratio);
        s.number("pole_mask_radius", c.counterexample.pole_mask_radius);
        s.boolean("freeze_f0", c.counterexample.freeze_f0);
    });
    r.section("wp", [&](Reader& s) {
        s.number("g2", c.wp.g2);
        s.number("g3", c.wp.g3);
        s.interval("re", c.wp.re);
        s.interval("im", c.wp.im);
        s.integer("n_re", c.wp.n_re);
        s.integer("n_im", c.wp.n_im);
    });
    r.section("quartic", [&](Reader& s) {
        if (const json* v = s.get("coefficients")) {
            if (!v->is_array() || v->size() != 5) {
                throw ConfigError(s.key("coefficients"), "expected [alpha, beta, gamma, delta, epsilon]");
            }
            for (std::size_t i = 0; i < 5; ++i) {
                if (!(*v)[i].is_number()) {
                    throw ConfigError(s.key("coefficients"), "expected numbers");
                }
                c.quartic.coefficients[i] = (*v)[i].get<double>();
            }
        }
        s.number("y0", c.quartic.y0);
        s.integer("branch", c.quartic.branch);
        s.interval("x", c.quartic.x);
        s.integer("n", c.quartic.n);
    });
    r.section("figure", [&](Reader& s) {
        s.integer("which", c.figure.which);
        s.text("variant_c", c.figure.variant_c);
        s.integer("n_f0", c.figure.n_f0);
    });
    r.section("output", [&](Reader& s) {
        s.text("dir", c.output.dir);
        s.text("prefix", c.output.prefix);
    });
    r.finish();
    validate_config(c);
    return c;
}

std::string serialize_config(const RunConfig& c) {
    json j;
    j["command"] = c.command;
    j["params"] = {{"a", c.a}, {"c1", c.c1}, {"c2", c.c2}, {"c3", c.c3}, {"c0", c.c0}};
    j["family"] = {{"tag", c.family},
                   {"amplitude", c.amplitude},
                   {"ft0",
                    {{"profile", c.ft0.profile},
                     {"value", c.ft0.value},
                     {"epsilon", c.ft0.epsilon},
                     {"c", c.ft0.c}}}};
    j["convention"] = c.convention;
    j["generic"] = {{"h0", c.h0},
                    {"f0_rule", c.f0_rule},
                    {"f0_value", c.f0_value},
                    {"h_branch", c.h_branch},
                    {"f_branch", c.f_branch}};
    j["grid"] = {{"t", interval_json(c.grid.t)},
                 {"z", interval_json(c.grid.z)},
                 {"n_t", c.grid.n_t},
                 {"n_z", c.grid.n_z},
                 {"pole_mask_radius", c.grid.pole_mask_radius}};
    j["verify"] = {{"scheme", c.scheme},
                   {"tolerance", c.tolerance},
                   {"violation_floor", c.violation_floor},
                   {"relative", c.relative}};
    j["counterexample"] = {{"z_star", c.counterexample.z_star},
                           {"t_range", interval_json(c.counterexample.t_range)},
                           {"n_t", c.counterexample.n_t},
                           {"fd_step", c.counterexample.fd_step},
                           {"ratio", c.counterexample.ratio},
                           {"pole_mask_radius", c.counterexample.pole_mask_radius},
                           {"freeze_f0", c.counterexample.freeze_f0}};
    j["wp"] = {{"g2", c.wp.g2},         {"g3", c.wp.g3},         {"re", interval_json(c.wp.re)},
               {"im", interval_json(c.wp.im)}, {"n_re", c.wp.n_re}, {"n_im", c.wp.n_im}};
    j["quartic"] = {{"coefficients", c.quartic.coefficients},
                    {"y0", c.quartic.y0},
                    {"branch", c.quartic.branch},
                    {"x", interval_json(c.quartic.x)},
                    {"n", c.quartic.n}};
    j["figure"] = {{"which", c.figure.which},
                   {"variant_c", c.figure.variant_c},
                   {"n_f0", c.figure.n_f0}};
    j["output"] = {{"dir", c.output.dir}, {"prefix", c.output.prefix}};
    return j.dump(2) + "\n";
}

void validate_config(const RunConfig& c) {
    static const std::set<std::string> commands = {
        "wp", "solve-quartic", "build", "verify", "counterexample", "classify", "audit", "figure"};
    if (!commands.count(c.command)) {
        throw ConfigError("command", "unknown command '" + c.command + "'");
    }
    for (const auto& [k, v] : {std::pair{"params.a", c.a}, std::pair{"params.c1", c.c1},
                               std::pair{"params.c2", c.c2}, std::pair{"params.c3", c.c3},
                               std::pair{"params.c0", c.c0}}) {
        if (!std::isfinite(v)) {
            throw ConfigError(k, "must be finite");
        }
    }
    if (c.a == 0.0) {
        throw ConfigError("params.a", "must be nonzero");
    }
    auto wrap = [](const char* key, auto&& fn) {
        try {
            fn();
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(key, e.what());
        }
    };
    wrap("family.tag", [&] { parse_family(c.family); });
    wrap("family.amplitude", [&] { parse_amplitude(c.amplitude); });
    wrap("convention", [&] { parse_convention(c.convention); });
    wrap("verify.scheme", [&] { parse_scheme(c.scheme); });
    wrap("grid", [&] { c.grid.validate(); });
    if (c.ft0.profile != "constant" && c.ft0.profile != "sine") {
        throw ConfigError("family.ft0.profile", "expected constant|sine");
    }
    if (c.f0_rule != "nearest_root" && c.f0_rule != "explicit") {
        throw ConfigError("generic.f0_rule", "expected nearest_root|explicit");
    }
    for (const auto& [k, v] : {std::pair{"generic.h_branch", c.h_branch},
                               std::pair{"generic.f_branch", c.f_branch},
                               std::pair{"quartic.branch", c.quartic.branch}}) {
        if (v != 1 && v != -1) {
            throw ConfigError(k, "must be +1 or -1");
        }
    }
    if (c.counterexample.n_t < 1) {
        throw ConfigError("counterexample.n_t", "must be positive");
    }
    if (!(c.counterexample.fd_step > 0.0)) {
        throw ConfigError("counterexample.fd_step", "must be positive");
    }
    if (!(c.counterexample.ratio > 0.0)) {
        throw ConfigError("counterexample.ratio", "must be positive");
    }
    if (c.wp.n_re < 1 || c.wp.n_im < 1) {
        throw ConfigError("wp.n_re", "point counts must be positive");
    }
    if (c.quartic.n < 2) {
        throw ConfigError("quartic.n", "must be at least 2");
    }
    if (c.figure.which < 1 || c.figure.which > 3) {
        throw ConfigError("figure.which", "expected 1, 2 or 3");
    }
    if (c.figure.variant_c != "sign_corrected" && c.figure.variant_c != "printed" &&
        c.figure.variant_c != "exact") {
        throw ConfigError("figure.variant_c", "expected sign_corrected|printed|exact");
    }
    if (c.figure.n_f0 < 2) {
        throw ConfigError("figure.n_f0", "must be at least 2");
    }
    if (c.tolerance < 0.0 || c.violation_floor < 0.0) {
        throw ConfigError("verify.tolerance", "must be non-negative");
    }
}

} // namespace cnlse
