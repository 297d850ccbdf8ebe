#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "masscut/solver.hpp"

namespace masscut::cli {

enum ExitCode : int {
  kSuccess = 0,
  /// Solved but failed verification, or no bound available.
  kFailed = 1,
  /// Usage, parse or schema error.
  kUsage = 2,
};

/// Runs one subcommand: gen, solve, verify, bounds or table.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

nlohmann::json trace_to_json(const std::vector<TraceStep>& trace);

}  // namespace masscut::cli
