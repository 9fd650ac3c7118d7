#pragma once

#include "cnlse/model.hpp"
#include "cnlse/verifier.hpp"

#include <array>
#include <optional>
#include <string>

namespace cnlse {

/// Grid of complex arguments for the `wp` command.
struct WpGridConfig {
    double g2 = 4.0;
    double g3 = 0.0;
    Interval re{0.05, 3.0};
    Interval im{0.0, 0.0};
    int n_re = 60;
    int n_im = 1;

    friend bool operator==(const WpGridConfig&, const WpGridConfig&) = default;
};

/// Quartic, start point and sample range for `solve-quartic`.
struct QuarticConfig {
    std::array<double, 5> coefficients{0.0, 0.0, 1.0, 0.0, 1.0}; // alpha..epsilon
    double y0 = 1.0;
    int branch = 1;
    Interval x{-2.0, 2.0};
    int n = 201;

    friend bool operator==(const QuarticConfig&, const QuarticConfig&) = default;
};

/// Preset profiles for the f_t = 0 family: f(z) = value (constant) or
/// f(z) = value sin(epsilon z) (sine).
struct Ft0Config {
    std::string profile = "sine";
    double value = 0.5;
    double epsilon = 0.1;
    double c = 1.0;

    friend bool operator==(const Ft0Config&, const Ft0Config&) = default;
};

struct FigureConfig {
    int which = 1;
    /// Parameter set of panel (c): sign_corrected (a = -0.46), printed
    /// (a = +0.46) or exact (a = -0.46 with c2 moved onto c1^2 + 4ac2 = 0).
    std::string variant_c = "sign_corrected";
    int n_f0 = 401;

    friend bool operator==(const FigureConfig&, const FigureConfig&) = default;
};

struct OutputConfig {
    std::string dir = ".";
    std::string prefix;

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct RunConfig {
    std::string command = "verify";
    double a = -1.0;
    double c1 = -2.0;
    double c2 = 0.4;
    double c3 = 0.03;
    double c0 = 0.0;
    std::string family = "g+";
    std::string amplitude = "signed";
    std::string convention = "printed";
    double h0 = 0.0;
    std::string f0_rule = "nearest_root";
    double f0_value = 0.87;
    int h_branch = 1;
    int f_branch = 1;
    GridSpec grid;
    std::string scheme = "analytic";
    double tolerance = 0.0;
    double violation_floor = 0.0;
    bool relative = false;
    CounterexampleOptions counterexample;
    WpGridConfig wp;
    QuarticConfig quartic;
    Ft0Config ft0;
    FigureConfig figure;
    OutputConfig output;

    CnlseParams params() const { return CnlseParams(a, c1, c2, c3, c0); }
    GenericConfig generic() const;
    SolutionFamily solution_family() const;

    friend bool operator==(const RunConfig&, const RunConfig&);
};

bool operator==(const Interval& x, const Interval& y);
bool operator==(const GridSpec& x, const GridSpec& y);
bool operator==(const CounterexampleOptions& x, const CounterexampleOptions& y);

/// Parses the JSON text of a configuration; missing keys keep their defaults.
/// Throws ConfigError naming the offending key (unknown keys included).
RunConfig parse_config(const std::string& json_text);

/// Full JSON document of the configuration (every key written).
std::string serialize_config(const RunConfig& cfg);

/// Checks the value ranges; throws ConfigError naming the offending key.
void validate_config(const RunConfig& cfg);

} // namespace cnlse
