#pragma once

#include <optional>
#include <string>

#include "quakebend/config.hpp"

namespace qb {

struct RunOverrides {
  std::optional<std::uint64_t> seed;  // --seed
  std::optional<double> tol;          // --tol (earthquake convergence tolerance)
};

// Executes one command (deform, earthquake, verify, crossings, limitset)
// against the configuration text, writing <command>_report.json (bit-exact
// reproducible for fixed config/seed/version), <command>_report.txt (same
// content plus timings) and command artifacts into out_dir.  Module errors
// are serialized as <command>_error.json with the witness.  On a numerical
// degeneracy the geometric commands retry over the documented basepoint
// offsets before giving up, and the report says so.  Returns the process
// exit code: 0 success, 2 configuration error, 3 numerical degeneracy,
// 4 check failure.
int run_command(const std::string& command, const std::string& config_text,
                const std::string& out_dir, const RunOverrides& overrides = {});

}  // namespace qb
