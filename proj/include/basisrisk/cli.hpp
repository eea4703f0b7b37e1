// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "basisrisk/config.hpp"
#include "basisrisk/manifest.hpp"

namespace basisrisk {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitRuntime = 2 };

/// Runs one subcommand against an already resolved configuration, writing
/// its CSVs and manifest.json into cfg.output_dir. `arguments` holds the
/// subcommand-specific flags (oracle geometry, fit input, ...). Throws
/// ConfigError for bad arguments and std::runtime_error for I/O failures.
RunManifest execute_command(const std::string& command, const RunConfig& cfg,
                            const std::map<std::string, std::string>& arguments,
                            std::ostream& out);

/// Full command line front end; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace basisrisk
