#pragma once

// Plain-text simulation configuration.
//
// One `key = value` pair per line; `#` starts a comment; blank lines are
// ignored; keys are case-sensitive and may appear once. Required keys:
// alpha, beta, gamma, d, du, dv, dt, t_end. See README.md for the full table.

#include <string>

#include "crossrd/simulation.hpp"

namespace crossrd {

/// Parses configuration text. `source` names the input in error messages.
/// Throws ParseError carrying the offending line (0 for a missing key).
SimConfig parse_config(const std::string& text, const std::string& source = "<config>");

/// Reads and parses a file; a relative mesh_file is resolved against the
/// file's directory. Throws std::runtime_error naming the path if unreadable.
SimConfig load_config(const std::string& path);

}  // namespace crossrd
