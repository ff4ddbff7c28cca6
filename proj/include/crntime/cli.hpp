#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace crntime::cli {

/// Seed used when --seed is not given.
inline constexpr std::uint64_t kDefaultSeed = 20130101;

/// Environment variable naming the default output directory for demo files.
inline constexpr const char* kOutDirEnv = "CRNTIME_OUT_DIR";

/// Runs the command line (args exclude the program name). Returns 0 on
/// success, 1 on domain errors and 2 on usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crntime::cli
