#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"

namespace staqst::cli {

enum ExitCode : int {
  kPass = 0,
  kChecksFailed = 1,
  kConfigError = 2,
  kNumericalFailure = 3,
};

struct DispatchResult {
  int status = kPass;
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;
};

/// Runs cfg.experiment and writes its CSV and JSON under out_dir/<id>/.
/// Progress and check lines go to `log`. Throws ConfigError, DomainError
/// and NumericalError; `run_main` maps them to exit codes.
DispatchResult dispatch(const RunConfig& cfg, std::ostream& log);

/// Full command-line entry point.
int run_main(int argc, char** argv);

}  // namespace staqst::cli
