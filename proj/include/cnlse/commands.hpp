#pragma once

#include "cnlse/config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace cnlse {

/// Exit codes of every command.
inline constexpr int exit_ok = 0;
inline constexpr int exit_violation = 1;
inline constexpr int exit_invalid = 2;

struct CommandResult {
    int exit_code = exit_ok;
    /// The report document (JSON text) also written to <dir>/<prefix><name>.json.
    std::string report;
    std::vector<std::string> files;
};

/// Runs cfg.command, writing CSV tables and the JSON report under cfg.output.
/// Invalid input (configuration or parameter-domain errors) gives exit_invalid
/// with the error in the report instead of throwing.
CommandResult run_command(const RunConfig& cfg);

/// Parameter sets of the three `figure 3` panels ("a", "b", "c") and the
/// family drawn in each.
struct Figure3Panel {
    std::string name;
    CnlseParams params;
    FamilyTag family;
};

std::vector<Figure3Panel> figure3_panels(const std::string& variant_c);

/// printf("%.17g").
std::string format_number(double v);

} // namespace cnlse
