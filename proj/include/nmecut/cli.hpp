#pragma once

#include <iosfwd>

namespace nmecut {

// Environment variable consulted for the default experiment seed.
inline constexpr const char* kSeedEnvVar = "NMECUT_SEED";

// Runs one subcommand. Exit codes: 0 success, 1 check or runtime failure,
// 2 usage error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nmecut
