// commands.hpp: the four dualseries subcommands and the argument front end

#pragma once

#include <iosfwd>
#include <string>

#include "cli/run_config.hpp"

namespace dualseries::cli {

// Each command renders its whole output before touching the filesystem, so a failure never
// leaves a partial file behind. Output without --out goes to `out`.
void cmd_propagate(const RunConfig& cfg, std::ostream& out);
void cmd_expand(const RunConfig& cfg, std::ostream& out);
void cmd_diagnose(const RunConfig& cfg, std::ostream& out);
void cmd_resum(const RunConfig& cfg, std::ostream& out);

// Full program: parses argv, runs one subcommand, maps failures to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dualseries::cli
