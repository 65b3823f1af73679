#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ivcut/graph.hpp"
#include "ivcut/identify.hpp"

namespace ivcut {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitInputError = 2 };

/// `{target: {from, to}, method, S: [{vertex, role[, subtracts]}], T: [vertex],
///   corrections: [{from, to}], formula}`
nlohmann::ordered_json certificate_to_json(const MixedGraph& g, const Certificate& cert);

/// Runs the command line `args` (program name excluded) and returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ivcut
