#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nvdrift::cli {

/// Exit codes of the nvdrift tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,     // bad flags or arguments
  kExitInput = 3,     // unreadable or malformed input files
  kExitPipeline = 4,  // a pipeline stage rejected the data
};

/// Runs one subcommand (simulate, ingest, correlate, train, predict, evaluate,
/// rabi-fit, report). Failures print exactly one line to `err`:
///   error kind=<UsageError|InputError|PipelineError> code=<code> message="<text>"
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nvdrift::cli
