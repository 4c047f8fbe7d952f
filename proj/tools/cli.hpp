#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>

#include "wigner/moments.hpp"

namespace wigner::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kCapacity = 3,
  kComparisonFailed = 4,
};

/// Runs one command line. argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Inline JSON when `arg` starts with '{', otherwise a file path.
nlohmann::json load_json(const std::string& arg);

/// Limiting moments 2, 4, ..., two_k_max described by a theory config
/// (see docs/config.md).
MomentSeries theory_series(const nlohmann::json& theory, const QuadratureConfig& defaults);

}  // namespace wigner::cli
