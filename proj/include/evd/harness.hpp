#pragma once

#include "evd/config.hpp"
#include "evd/report.hpp"

#include <map>
#include <string>
#include <vector>

namespace evd {

/// Dispatch a parsed config to its check implementation. Throws ConfigError
/// for unknown checks or malformed blocks; other exceptions indicate bugs.
CheckReport run(const ExperimentConfig& config);

/// All config "check" names the harness understands.
std::vector<std::string> known_checks();

/// CLI subcommand -> the checks it accepts.
const std::map<std::string, std::vector<std::string>>& subcommand_checks();

/// 0 for pass/report-only, 1 for fail.
int exit_code(CheckStatus status);

}  // namespace evd
